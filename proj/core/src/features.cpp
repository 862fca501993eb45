#include "sheafgauge/sheaf.hpp"

#include <cmath>
#include <string>

namespace sheafgauge {

namespace {

/** Flips each column so that its largest-magnitude entry is positive. */
void canonicalize_signs(Matrix& basis)
{
    for (Index j = 0; j < basis.cols(); ++j) {
        Index arg = 0;
        double best = -1.0;
        for (Index i = 0; i < basis.rows(); ++i) {
            if (std::abs(basis(i, j)) > best + 1e-12) {
                best = std::abs(basis(i, j));
                arg = i;
            }
        }
        if (basis.rows() > 0 && basis(arg, j) < 0.0) {
            basis.col(j) = -basis.col(j);
        }
    }
}

void require_same_ambient(const Stalk& a, const Stalk& b, const char* what)
{
    if (a.ambient_dim() != b.ambient_dim()) {
        throw DimensionError(std::string(what) + ": ambient dimensions " + std::to_string(a.ambient_dim()) +
                             " and " + std::to_string(b.ambient_dim()) + " differ");
    }
}

} // namespace

std::vector<Stalk> node_stalks_from_features(const FeatureMap& features, Index vertex_count,
                                             const FeaturePipelineConfig& config)
{
    config.validate();
    Index ambient = 0;
    for (const auto& [v, f] : features) {
        if (v < 0 || v >= vertex_count) {
            throw InputError("features: vertex " + std::to_string(v) + " is outside 0.." +
                             std::to_string(vertex_count - 1));
        }
        if (f.rows() == 0 || f.cols() == 0) {
            throw InputError("features: vertex " + std::to_string(v) + " has an empty feature matrix");
        }
        if (!f.allFinite()) {
            throw InputError("features: vertex " + std::to_string(v) + " has non-finite entries");
        }
        ambient = std::max(ambient, f.rows());
    }
    std::vector<Stalk> stalks;
    stalks.reserve(static_cast<std::size_t>(vertex_count));
    for (Index v = 0; v < vertex_count; ++v) {
        auto it = features.find(v);
        if (it == features.end()) {
            throw InputError("features: vertex " + std::to_string(v) + " has no feature matrix");
        }
        Matrix padded = Matrix::Zero(ambient, it->second.cols());
        padded.topRows(it->second.rows()) = it->second;
        Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeThinU);
        const Vector& s = svd.singularValues();
        const double cutoff = s.size() > 0 ? config.svd_tol * s(0) : 0.0;
        Index keep = 0;
        while (keep < s.size() && s(keep) > cutoff && s(keep) > 0.0) {
            ++keep;
        }
        Matrix basis = svd.matrixU().leftCols(keep);
        canonicalize_signs(basis);
        stalks.push_back(Stalk{std::move(basis)});
    }
    return stalks;
}

EdgeIntersection edge_stalk_intersection(const Stalk& u, const Stalk& v, const FeaturePipelineConfig& config)
{
    config.validate();
    require_same_ambient(u, v, "edge_stalk_intersection");
    EdgeIntersection out;
    const Matrix m = u.basis.transpose() * v.basis;
    Matrix basis(u.ambient_dim(), 0);
    if (m.size() > 0) {
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.cosines = svd.singularValues();
        Index keep = 0;
        while (keep < out.cosines.size() && out.cosines(keep) > config.edge_align_tol) {
            ++keep;
        }
        basis.resize(u.ambient_dim(), keep);
        for (Index i = 0; i < keep; ++i) {
            const Vector a = u.basis * svd.matrixU().col(i);
            const Vector b = v.basis * svd.matrixV().col(i);
            basis.col(i) = (a + b) / std::sqrt(2.0 * (1.0 + out.cosines(i)));
        }
    } else {
        out.cosines = Vector(0);
    }
    canonicalize_signs(basis);
    out.from_u = basis.transpose() * u.basis;
    out.from_v = basis.transpose() * v.basis;
    out.stalk = Stalk{std::move(basis)};
    return out;
}

TriangleIntersection triangle_stalk_soft_intersection(const Stalk& uv, const Stalk& vw, const Stalk& uw,
                                                      const FeaturePipelineConfig& config)
{
    config.validate();
    require_same_ambient(uv, vw, "triangle_stalk_soft_intersection");
    require_same_ambient(uv, uw, "triangle_stalk_soft_intersection");
    const Matrix p_uv = uv.basis * uv.basis.transpose();
    const Matrix p_vw = vw.basis * vw.basis.transpose();
    const Matrix p_uw = uw.basis * uw.basis.transpose();
    const Matrix a = p_uv * p_vw * p_uw;
    Matrix t = a.transpose() * a;
    t = 0.5 * (t + t.transpose());
    TriangleIntersection out;
    const Index ambient = uv.ambient_dim();
    Matrix basis(ambient, 0);
    if (ambient > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(t);
        const Vector& vals = eig.eigenvalues();
        out.eigenvalues = vals.reverse();
        std::vector<Index> keep;
        for (Index i = ambient - 1; i >= 0; --i) {
            const double lam = std::max(vals(i), 0.0);
            if (std::pow(lam, config.tri_exponent) > config.tri_eig_tol) {
                keep.push_back(i);
            }
        }
        basis.resize(ambient, static_cast<Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            basis.col(static_cast<Index>(j)) = eig.eigenvectors().col(keep[j]);
        }
    } else {
        out.eigenvalues = Vector(0);
    }
    canonicalize_signs(basis);
    out.from_uv = basis.transpose() * uv.basis;
    out.from_uw = basis.transpose() * uw.basis;
    out.from_vw = basis.transpose() * vw.basis;
    out.stalk = Stalk{std::move(basis)};
    return out;
}

CellSheaf build_sheaf_from_features(const Graph& graph, const FeatureMap& features,
                                    const FeaturePipelineConfig& config)
{
    config.validate();
    CliqueComplex cx = build_clique_complex(graph);
    std::array<std::vector<Stalk>, 3> stalks;
    std::array<std::vector<Matrix>, 2> maps;
    stalks[0] = node_stalks_from_features(features, cx.vertex_count(), config);
    for (const Edge& e : cx.edges()) {
        auto inter = edge_stalk_intersection(stalks[0][static_cast<std::size_t>(e[0])],
                                             stalks[0][static_cast<std::size_t>(e[1])], config);
        stalks[1].push_back(std::move(inter.stalk));
        maps[0].push_back(std::move(inter.from_u));
        maps[0].push_back(std::move(inter.from_v));
    }
    for (const Triangle& t : cx.triangles()) {
        const auto uv = *cx.find_edge(t[0], t[1]);
        const auto uw = *cx.find_edge(t[0], t[2]);
        const auto vw = *cx.find_edge(t[1], t[2]);
        auto inter = triangle_stalk_soft_intersection(stalks[1][static_cast<std::size_t>(uv)],
                                                      stalks[1][static_cast<std::size_t>(vw)],
                                                      stalks[1][static_cast<std::size_t>(uw)], config);
        stalks[2].push_back(std::move(inter.stalk));
        maps[1].push_back(std::move(inter.from_uv));
        maps[1].push_back(std::move(inter.from_uw));
        maps[1].push_back(std::move(inter.from_vw));
    }
    CellSheaf sheaf(std::move(cx), std::move(stalks), std::move(maps));
    sheaf.set_validated(validate_sheaf(sheaf, config.functoriality_tol).ok);
    return sheaf;
}

} // namespace sheafgauge
