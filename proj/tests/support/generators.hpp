#pragma once

#include <sheafgauge/complex.hpp>
#include <sheafgauge/random.hpp>
#include <sheafgauge/sheaf.hpp>
#include <sheafgauge/spectral.hpp>

#include <Eigen/QR>

#include <vector>

/** Hand-rolled random generators for property tests; every draw is seeded. */
namespace gen {

using sheafgauge::Graph;
using sheafgauge::Index;
using sheafgauge::Matrix;
using sheafgauge::Rng;
using sheafgauge::Vector;

/** Erdos-Renyi graph plus a spanning path so the result is connected. */
inline Graph random_graph(Rng& rng, Index n, double p)
{
    Graph g{n, {}};
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            if (v == u + 1 || rng.uniform() < p) {
                g.edges.push_back({u, v});
            }
        }
    }
    return g;
}

/** Orthonormal basis of a random subspace of R^ambient. */
inline Matrix random_subspace(Rng& rng, Index ambient, Index dim)
{
    Eigen::HouseholderQR<Matrix> qr(rng.gaussian(ambient, dim));
    return qr.householderQ() * Matrix::Identity(ambient, dim);
}

/**
 * Features sharing a 2-dimensional subspace inside the first 6 coordinates of
 * R^10, plus one private direction per vertex. Every third vertex uses only
 * 8 ambient rows so the pipeline has to pad.
 */
inline sheafgauge::FeatureMap random_features(Rng& rng, Index n)
{
    const Index ambient = 10;
    Matrix shared = Matrix::Zero(ambient, 2);
    shared.topRows(6) = random_subspace(rng, 6, 2);
    sheafgauge::FeatureMap features;
    for (Index v = 0; v < n; ++v) {
        const Index rows = v % 3 == 2 ? 8 : ambient;
        Matrix basis(rows, 3);
        basis.leftCols(2) = shared.topRows(rows);
        basis.col(2) = rng.gaussian(rows, 1);
        features[v] = basis * rng.gaussian(3, 5);
    }
    return features;
}

/** Random PSD matrix with a planted kernel of the given dimension. */
inline Matrix random_psd(Rng& rng, Index n, Index kernel)
{
    const Matrix q = rng.orthogonal(n);
    Vector d(n);
    for (Index i = 0; i < n; ++i) {
        d(i) = i < kernel ? 0.0 : rng.uniform(0.05, 3.0);
    }
    return q * d.asDiagonal() * q.transpose();
}

/** Random ascending spectrum with some kernel and a few repeated values. */
inline Vector random_spectrum(Rng& rng, Index n)
{
    Vector d(n);
    const Index kernel = static_cast<Index>(rng.below(3));
    for (Index i = 0; i < n; ++i) {
        d(i) = i < kernel ? 0.0 : rng.uniform(0.01, 4.0);
    }
    if (n > kernel + 2 && rng.uniform() < 0.5) {
        d(n - 1) = d(n - 2);
    }
    std::sort(d.data(), d.data() + n);
    return d;
}

/** Spectrum object for a diagonal operator in a random orthonormal basis. */
inline sheafgauge::Spectrum spectrum_of(Rng& rng, const Vector& eigenvalues)
{
    const Matrix q = rng.orthogonal(eigenvalues.size());
    const Matrix l = q * eigenvalues.asDiagonal() * q.transpose();
    return sheafgauge::eigendecompose(Matrix(0.5 * (l + l.transpose())));
}

} // namespace gen
