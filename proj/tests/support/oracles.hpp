#pragma once

#include <sheafgauge/complex.hpp>
#include <sheafgauge/sheaf.hpp>
#include <sheafgauge/types.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

/**
 * Reference computations that avoid the library's own linear algebra paths.
 * Ranks use full-pivot LU, spectra use the general (non-symmetric) solver.
 */
namespace oracle {

using sheafgauge::Index;
using sheafgauge::Matrix;
using sheafgauge::Vector;

inline Index rank(const Matrix& m, double rel_tol = 1e-9)
{
    if (m.size() == 0) {
        return 0;
    }
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(rel_tol);
    return lu.rank();
}

inline std::vector<double> eigenvalues(const Matrix& m)
{
    std::vector<double> out;
    if (m.size() == 0) {
        return out;
    }
    Eigen::EigenSolver<Matrix> es(m, false);
    for (Index i = 0; i < m.rows(); ++i) {
        out.push_back(es.eigenvalues()(i).real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

inline std::vector<double> to_vector(const Vector& v)
{
    return {v.data(), v.data() + v.size()};
}

/** L0 spectrum of the rank-1 trivial bundle on the n-cycle: 2(1 - cos(2 pi k / n)). */
inline std::vector<double> trivial_cycle_spectrum(Index n)
{
    std::vector<double> out;
    for (Index k = 0; k < n; ++k) {
        out.push_back(2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n))));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/** L0 spectrum of the rank-1 Moebius bundle on the n-cycle: 2(1 - cos((2k + 1) pi / n)). */
inline std::vector<double> mobius_cycle_spectrum(Index n)
{
    std::vector<double> out;
    for (Index k = 0; k < n; ++k) {
        out.push_back(2.0 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(2 * k + 1) / static_cast<double>(n))));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/** Combinatorial graph Laplacian D - A. */
inline Matrix graph_laplacian(const sheafgauge::Graph& g)
{
    Matrix l = Matrix::Zero(g.vertex_count, g.vertex_count);
    for (const auto& e : g.edges) {
        l(e[0], e[0]) += 1.0;
        l(e[1], e[1]) += 1.0;
        l(e[0], e[1]) -= 1.0;
        l(e[1], e[0]) -= 1.0;
    }
    return l;
}

/**
 * Coboundary d0 of a rank-k bundle on the n-cycle built from scratch: edges
 * sorted lexicographically, -I at the lower endpoint and +twist at the upper one.
 */
inline Matrix cycle_bundle_d0(Index n, Index k, const std::map<sheafgauge::Edge, Matrix>& twists)
{
    std::vector<sheafgauge::Edge> edges;
    for (Index i = 0; i < n; ++i) {
        const Index a = i;
        const Index b = (i + 1) % n;
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(edges.begin(), edges.end());
    Matrix d = Matrix::Zero(n * k, n * k);
    for (Index e = 0; e < n; ++e) {
        const auto [u, v] = edges[static_cast<std::size_t>(e)];
        d.block(e * k, u * k, k, k) = -Matrix::Identity(k, k);
        const auto it = twists.find(edges[static_cast<std::size_t>(e)]);
        d.block(e * k, v * k, k, k) = it == twists.end() ? Matrix::Identity(k, k) : it->second;
    }
    return d;
}

/** Betti numbers of 0 -> C0 -> C1 -> C2 -> 0 by LU rank-nullity. */
inline std::array<Index, 3> betti(const Matrix& d0, const Matrix& d1)
{
    const Index r0 = rank(d0);
    const Index r1 = rank(d1);
    return {d0.cols() - r0, d0.rows() - r0 - r1, d1.rows() - r1};
}

/** Rank of an orthogonal projector difference: subspaces equal iff the norm vanishes. */
inline double projector_distance(const Matrix& a, const Matrix& b)
{
    auto proj = [](const Matrix& basis) {
        if (basis.cols() == 0) {
            return Matrix(Matrix::Zero(basis.rows(), basis.rows()));
        }
        const Matrix q = basis * (basis.transpose() * basis).inverse() * basis.transpose();
        return q;
    };
    return (proj(a) - proj(b)).norm();
}

} // namespace oracle
