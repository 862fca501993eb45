#include "sheafgauge/sheaf.hpp"

#include "sheafgauge/random.hpp"

#include <cmath>
#include <string>

namespace sheafgauge {

namespace {

std::string shape_text(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

CellSheaf::CellSheaf(CliqueComplex complex, std::array<std::vector<Stalk>, 3> stalks,
                     std::array<std::vector<Matrix>, 2> restrictions)
    : complex_(std::move(complex)), stalks_(std::move(stalks)), restrictions_(std::move(restrictions))
{
    for (int d = 0; d < 3; ++d) {
        const auto have = static_cast<Index>(stalks_[static_cast<std::size_t>(d)].size());
        if (have != complex_.cell_count(d)) {
            throw DimensionError("CellSheaf: " + std::to_string(have) + " stalks of dimension " +
                                 std::to_string(d) + " for " + std::to_string(complex_.cell_count(d)) +
                                 " cells");
        }
    }
    for (int d = 1; d <= 2; ++d) {
        const auto incs = complex_.incidences(d);
        const auto& maps = restrictions_[static_cast<std::size_t>(d - 1)];
        if (maps.size() != incs.size()) {
            throw DimensionError("CellSheaf: " + std::to_string(maps.size()) +
                                 " restrictions for " + std::to_string(incs.size()) +
                                 " incidences of dimension " + std::to_string(d));
        }
        for (std::size_t k = 0; k < incs.size(); ++k) {
            const Index rows = stalk_dim(d, incs[k].coface);
            const Index cols = stalk_dim(d - 1, incs[k].face);
            if (maps[k].rows() != rows || maps[k].cols() != cols) {
                throw DimensionError("CellSheaf: restriction " + std::to_string(k) + " of dimension " +
                                     std::to_string(d) + " has shape " + shape_text(maps[k]) +
                                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
            }
        }
    }
    rebuild_offsets();
}

void CellSheaf::rebuild_offsets()
{
    for (int d = 0; d < 3; ++d) {
        auto& off = offsets_[static_cast<std::size_t>(d)];
        off.assign(stalks_[static_cast<std::size_t>(d)].size() + 1, 0);
        for (std::size_t i = 0; i < stalks_[static_cast<std::size_t>(d)].size(); ++i) {
            off[i + 1] = off[i] + stalks_[static_cast<std::size_t>(d)][i].dim();
        }
    }
}

const std::vector<Stalk>& CellSheaf::stalks(int dim) const
{
    if (dim < 0 || dim > 2) {
        throw DimensionError("stalks: dimension must be 0, 1 or 2");
    }
    return stalks_[static_cast<std::size_t>(dim)];
}

const Stalk& CellSheaf::stalk(int dim, Index cell) const
{
    const auto& list = stalks(dim);
    if (cell < 0 || cell >= static_cast<Index>(list.size())) {
        throw DimensionError("stalk: no cell " + std::to_string(cell) + " of dimension " +
                             std::to_string(dim));
    }
    return list[static_cast<std::size_t>(cell)];
}

Index CellSheaf::cochain_dim(int dim) const
{
    if (dim < 0 || dim > 2) {
        return 0;
    }
    return offsets_[static_cast<std::size_t>(dim)].back();
}

Index CellSheaf::cochain_offset(int dim, Index cell) const
{
    stalk(dim, cell);
    return offsets_[static_cast<std::size_t>(dim)][static_cast<std::size_t>(cell)];
}

Index CellSheaf::max_ambient_dim() const
{
    Index m = 0;
    for (const auto& list : stalks_) {
        for (const auto& s : list) {
            m = std::max(m, s.ambient_dim());
        }
    }
    return m;
}

const std::vector<Matrix>& CellSheaf::restrictions(int coface_dim) const
{
    if (coface_dim != 1 && coface_dim != 2) {
        throw DimensionError("restrictions: coface dimension must be 1 or 2");
    }
    return restrictions_[static_cast<std::size_t>(coface_dim - 1)];
}

const Matrix& CellSheaf::restriction(int coface_dim, Index k) const
{
    const auto& maps = restrictions(coface_dim);
    if (k < 0 || k >= static_cast<Index>(maps.size())) {
        throw IncidenceError("restriction: incidence " + std::to_string(k) + " out of range");
    }
    return maps[static_cast<std::size_t>(k)];
}

const Matrix& CellSheaf::restriction(CellId face, CellId coface) const
{
    complex_.incidence_sign(coface, face);
    const Index off = complex_.incidence_offset(coface.dim, coface.index);
    const auto faces = complex_.faces_of(coface.dim, coface.index);
    for (std::size_t k = 0; k < faces.size(); ++k) {
        if (faces[k].face == face.index) {
            return restriction(coface.dim, off + static_cast<Index>(k));
        }
    }
    throw IncidenceError("restriction: not incident");
}

void CellSheaf::set_restriction(int coface_dim, Index k, Matrix map)
{
    const Matrix& old = restriction(coface_dim, k);
    if (old.rows() != map.rows() || old.cols() != map.cols()) {
        throw DimensionError("set_restriction: shape " + shape_text(map) + " does not match " +
                             shape_text(old));
    }
    restrictions_[static_cast<std::size_t>(coface_dim - 1)][static_cast<std::size_t>(k)] = std::move(map);
}

SheafValidationReport validate_sheaf(const CellSheaf& sheaf, double tol)
{
    const CliqueComplex& cx = sheaf.complex();
    SheafValidationReport report;
    for (Index t = 0; t < cx.cell_count(2); ++t) {
        const auto tri_faces = cx.faces_of(2, t);
        const Index tri_off = cx.incidence_offset(2, t);
        for (Index v : cx.cell_vertices({2, t})) {
            // The two edges of the triangle containing v.
            std::vector<std::pair<Index, Matrix>> paths;
            for (std::size_t k = 0; k < tri_faces.size(); ++k) {
                const Index e = tri_faces[k].face;
                const auto ev = cx.faces_of(1, e);
                for (std::size_t m = 0; m < ev.size(); ++m) {
                    if (ev[m].face == v) {
                        const Matrix& rho_ve =
                            sheaf.restriction(1, cx.incidence_offset(1, e) + static_cast<Index>(m));
                        const Matrix& rho_et = sheaf.restriction(2, tri_off + static_cast<Index>(k));
                        paths.emplace_back(e, rho_et * rho_ve);
                    }
                }
            }
            const double defect = (paths[0].second - paths[1].second).norm();
            report.max_defect = std::max(report.max_defect, defect);
            if (!(defect <= tol)) {
                report.ok = false;
                report.violations.push_back({t, v, paths[0].first, paths[1].first, defect});
            }
        }
    }
    return report;
}

CellSheaf constant_sheaf(const CliqueComplex& complex, Index k)
{
    if (k < 0) {
        throw ConfigError("constant_sheaf: negative stalk dimension");
    }
    std::array<std::vector<Stalk>, 3> stalks;
    for (int d = 0; d < 3; ++d) {
        stalks[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(complex.cell_count(d)),
                                                    Stalk::standard(k));
    }
    std::array<std::vector<Matrix>, 2> maps;
    for (int d = 1; d <= 2; ++d) {
        maps[static_cast<std::size_t>(d - 1)].assign(complex.incidences(d).size(), Matrix::Identity(k, k));
    }
    return CellSheaf(complex, std::move(stalks), std::move(maps));
}

Edge closing_edge(Index n)
{
    return Edge{0, n - 1};
}

CellSheaf make_line_bundle(Index n, Index stalk_dim, const std::map<Edge, Matrix>& twists,
                           const std::map<Edge, double>& link_strengths)
{
    if (n < 3) {
        throw ConfigError("make_line_bundle: need n >= 3, got " + std::to_string(n));
    }
    if (stalk_dim < 1) {
        throw ConfigError("make_line_bundle: stalk dimension must be positive");
    }
    const CliqueComplex cx = build_clique_complex(cycle_graph(n));
    for (const auto& [edge, twist] : twists) {
        if (!cx.find_edge(edge[0], edge[1]) || edge[0] >= edge[1]) {
            throw ValidationError("make_line_bundle: twist on (" + std::to_string(edge[0]) + ", " +
                                  std::to_string(edge[1]) + ") which is not an edge (u < v) of the cycle");
        }
        if (twist.rows() != stalk_dim || twist.cols() != stalk_dim) {
            throw DimensionError("make_line_bundle: twist has shape " + shape_text(twist));
        }
        const double err = (twist.transpose() * twist - Matrix::Identity(stalk_dim, stalk_dim)).norm();
        if (err > 1e-10) {
            throw ValidationError("make_line_bundle: twist on (" + std::to_string(edge[0]) + ", " +
                                  std::to_string(edge[1]) + ") is not orthogonal (residual " +
                                  std::to_string(err) + ")");
        }
    }
    for (const auto& [edge, w] : link_strengths) {
        if (!cx.find_edge(edge[0], edge[1]) || edge[0] >= edge[1]) {
            throw ValidationError("make_line_bundle: link strength on a non-edge");
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigError("make_line_bundle: link strength must be finite and non-negative");
        }
    }
    CellSheaf sheaf = constant_sheaf(cx, stalk_dim);
    for (Index e = 0; e < cx.cell_count(1); ++e) {
        const Edge& edge = cx.edges()[static_cast<std::size_t>(e)];
        double w = 1.0;
        if (auto it = link_strengths.find(edge); it != link_strengths.end()) {
            w = it->second;
        }
        Matrix from_v = Matrix::Identity(stalk_dim, stalk_dim);
        if (auto it = twists.find(edge); it != twists.end()) {
            from_v = it->second;
        }
        const Index off = cx.incidence_offset(1, e);
        sheaf.set_restriction(1, off, w * Matrix::Identity(stalk_dim, stalk_dim));
        sheaf.set_restriction(1, off + 1, w * from_v);
    }
    return sheaf;
}

CellSheaf trivial_bundle(Index n, Index stalk_dim)
{
    return make_line_bundle(n, stalk_dim, {});
}

CellSheaf mobius_bundle(Index n, Index stalk_dim)
{
    return make_line_bundle(n, stalk_dim, {{closing_edge(n), -Matrix::Identity(stalk_dim, stalk_dim)}});
}

CellSheaf hidden_twist_bundle(const HiddenTwistParams& params)
{
    Matrix rot(2, 2);
    rot << std::cos(params.tau), -std::sin(params.tau), std::sin(params.tau), std::cos(params.tau);
    const Edge defect = closing_edge(params.n);
    return make_line_bundle(params.n, 2, {{defect, rot}}, {{defect, params.link_strength}});
}

CellSheaf add_restriction_noise(const CellSheaf& sheaf, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("add_restriction_noise: sigma must be finite and non-negative");
    }
    CellSheaf out = sheaf;
    if (sigma == 0.0) {
        return out;
    }
    Rng rng(seed);
    const CliqueComplex& cx = sheaf.complex();
    for (Index e = 0; e < cx.cell_count(1); ++e) {
        const double angle = sigma * rng.normal();
        const Index k = sheaf.stalk_dim(1, e);
        if (k < 2) {
            continue;
        }
        Vector a = Vector::Unit(k, 0);
        Vector b = Vector::Unit(k, 1);
        if (k > 2) {
            Matrix plane = rng.gaussian(k, 2);
            Eigen::HouseholderQR<Matrix> qr(plane);
            const Matrix q = qr.householderQ() * Matrix::Identity(k, 2);
            a = q.col(0);
            b = q.col(1);
        }
        const Matrix rot = Matrix::Identity(k, k) + (std::cos(angle) - 1.0) * (a * a.transpose() + b * b.transpose()) +
                           std::sin(angle) * (b * a.transpose() - a * b.transpose());
        const Index pos = cx.incidence_offset(1, e) + 1;
        out.set_restriction(1, pos, rot * sheaf.restriction(1, pos));
    }
    return out;
}

CellSheaf noisy_trivial_bundle(Index n, Index stalk_dim, double sigma, std::uint64_t seed)
{
    return add_restriction_noise(trivial_bundle(n, stalk_dim), sigma, seed);
}

void FeaturePipelineConfig::validate() const
{
    auto in_unit = [](double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; };
    if (!in_unit(svd_tol)) {
        throw ConfigError("svd_tol must lie in (0, 1]");
    }
    if (!in_unit(edge_align_tol)) {
        throw ConfigError("edge_align_tol must lie in (0, 1]");
    }
    if (!in_unit(tri_eig_tol)) {
        throw ConfigError("tri_eig_tol must lie in (0, 1]");
    }
    if (!(tri_exponent > 0.0) || !std::isfinite(tri_exponent)) {
        throw ConfigError("tri_exponent must be positive");
    }
    if (!(functoriality_tol >= 0.0)) {
        throw ConfigError("functoriality_tol must be non-negative");
    }
}

} // namespace sheafgauge
