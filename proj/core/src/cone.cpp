#include "sheafgauge/operators.hpp"
#include "sheafgauge/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sheafgauge {

namespace {

void require_vertex_level(const GroundingMorphism& g, const char* what)
{
    if (g.mode != GroundingMode::VertexLevel) {
        throw ModeError(std::string(what) + ": requires a vertex-level grounding");
    }
}

void require_constant_target(const GroundingMorphism& g, const char* what)
{
    require_vertex_level(g, what);
    if (g.target != TargetKind::Constant) {
        throw ModeError(std::string(what) + ": requires the constant target sheaf");
    }
}

/** Largest norm of eps^{n+1} d_F^n - d_W^n eps^n over all degrees. */
double chain_map_residual(const CochainComplex& base, const CochainComplex& target, const ChainMap& eps)
{
    auto comp = [&](int n) {
        auto it = eps.find(n);
        return it == eps.end() ? Matrix(Matrix::Zero(target.dim(n), base.dim(n))) : it->second;
    };
    double worst = 0.0;
    const int lo = std::min(base.lowest_degree(), target.lowest_degree());
    const int hi = std::max(base.highest_degree(), target.highest_degree());
    for (int n = lo; n < hi; ++n) {
        const Matrix lhs = comp(n + 1) * base.differential(n);
        const Matrix rhs = target.differential(n) * comp(n);
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

} // namespace

AlgebraicCone algebraic_cone(const CellSheaf& sheaf, const GroundingMorphism& grounding, double tol)
{
    require_vertex_level(grounding, "algebraic_cone");
    AlgebraicCone out;
    out.base = sheaf_cochain_complex(sheaf);
    out.target = target_cochain_complex(sheaf.complex(), grounding.target_dim, grounding.target);
    out.chain_map = grounding_chain_map(sheaf, grounding);
    out.cone = mapping_cone(out.base, out.target, out.chain_map);
    out.square_residual = out.cone.square_residual();
    out.is_complex = out.square_residual <= tol;
    out.defect_norm = incidence_defect(sheaf, grounding).total_norm;
    return out;
}

CellSheaf geometric_cone_sheaf(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    require_constant_target(grounding, "geometric_cone_sheaf");
    const CliqueComplex& base = sheaf.complex();
    CliqueComplex cx = cone_complex(base);
    const Index apex = *cx.apex();
    const Index w = grounding.target_dim;
    const Stalk ground = Stalk::standard(w);
    const Matrix id = Matrix::Identity(w, w);
    const auto& eps = grounding.cell_maps;

    std::array<std::vector<Stalk>, 3> stalks;
    std::array<std::vector<Matrix>, 2> maps;
    stalks[0] = sheaf.stalks(0);
    stalks[0].push_back(ground);
    for (Index e = 0; e < cx.cell_count(1); ++e) {
        const Edge& edge = cx.edges()[static_cast<std::size_t>(e)];
        if (edge[1] == apex) {
            stalks[1].push_back(ground);
            maps[0].push_back(eps[0][static_cast<std::size_t>(edge[0])]);
            maps[0].push_back(id);
        } else {
            const Index b = *base.find_edge(edge[0], edge[1]);
            stalks[1].push_back(sheaf.stalk(1, b));
            const Index off = base.incidence_offset(1, b);
            maps[0].push_back(sheaf.restriction(1, off));
            maps[0].push_back(sheaf.restriction(1, off + 1));
        }
    }
    for (Index t = 0; t < cx.cell_count(2); ++t) {
        const Triangle& tri = cx.triangles()[static_cast<std::size_t>(t)];
        if (tri[2] == apex) {
            stalks[2].push_back(ground);
            const Index b = *base.find_edge(tri[0], tri[1]);
            maps[1].push_back(eps[1][static_cast<std::size_t>(b)]);
            maps[1].push_back(id);
            maps[1].push_back(id);
        } else {
            const Index b = *base.find_triangle(tri[0], tri[1], tri[2]);
            stalks[2].push_back(sheaf.stalk(2, b));
            const Index off = base.incidence_offset(2, b);
            for (Index k = 0; k < 3; ++k) {
                maps[1].push_back(sheaf.restriction(2, off + k));
            }
        }
    }
    CellSheaf out(std::move(cx), std::move(stalks), std::move(maps));
    out.set_validated(validate_sheaf(out).ok);
    return out;
}

ConeEquivalenceReport verify_cone_equivalence(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                              double defect_tol, double residual_tol)
{
    require_constant_target(grounding, "verify_cone_equivalence");
    ConeEquivalenceReport report;
    report.defect_norm = incidence_defect(sheaf, grounding).total_norm;
    report.hypotheses_met = report.defect_norm <= defect_tol;

    const CellSheaf geo = geometric_cone_sheaf(sheaf, grounding);
    const CliqueComplex& cx = geo.complex();
    const CliqueComplex& base = sheaf.complex();
    const Index apex = *cx.apex();
    const Index w = grounding.target_dim;
    const CochainComplex translated =
        translated_cone(sheaf_cochain_complex(sheaf),
                        target_cochain_complex(base, w, TargetKind::Constant, true),
                        grounding_chain_map(sheaf, grounding));

    // Position of each geometric cochain coordinate inside the translated cone.
    auto coordinate_map = [&](int n) {
        std::vector<Index> map(static_cast<std::size_t>(geo.cochain_dim(n)));
        for (Index c = 0; c < cx.cell_count(n); ++c) {
            const auto verts = cx.cell_vertices({n, c});
            Index target_offset = 0;
            if (verts.back() == apex) {
                Index coned = 0;
                if (n == 1) {
                    coned = verts[0];
                } else if (n == 2) {
                    coned = *base.find_edge(verts[0], verts[1]);
                }
                target_offset = sheaf.cochain_dim(n) + coned * w;
            } else if (n == 0) {
                target_offset = sheaf.cochain_offset(0, c);
            } else if (n == 1) {
                target_offset = sheaf.cochain_offset(1, *base.find_edge(verts[0], verts[1]));
            } else {
                target_offset = sheaf.cochain_offset(2, *base.find_triangle(verts[0], verts[1], verts[2]));
            }
            const Index from = geo.cochain_offset(n, c);
            for (Index i = 0; i < geo.stalk_dim(n, c); ++i) {
                map[static_cast<std::size_t>(from + i)] = target_offset + i;
            }
        }
        return map;
    };

    const std::array<std::vector<Index>, 3> maps{coordinate_map(0), coordinate_map(1), coordinate_map(2)};
    for (int n = 0; n < 2; ++n) {
        const Matrix dgeo = coboundary(geo, n);
        const Matrix dalg = translated.differential(n);
        if (dalg.rows() != dgeo.rows() || dalg.cols() != dgeo.cols()) {
            throw DimensionError("verify_cone_equivalence: cochain dimensions disagree in degree " +
                                 std::to_string(n));
        }
        Matrix moved = Matrix::Zero(dalg.rows(), dalg.cols());
        const auto& rows = maps[static_cast<std::size_t>(n + 1)];
        const auto& cols = maps[static_cast<std::size_t>(n)];
        for (Index i = 0; i < dgeo.rows(); ++i) {
            for (Index j = 0; j < dgeo.cols(); ++j) {
                moved(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]) = dgeo(i, j);
            }
        }
        const double r = moved.size() == 0 ? 0.0 : (moved - dalg).cwiseAbs().maxCoeff();
        report.residuals.push_back(r);
        report.max_residual = std::max(report.max_residual, r);
    }
    report.passed = report.hypotheses_met && report.max_residual < residual_tol;
    return report;
}

ExactnessReport verify_long_exact_sequence(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                           double defect_tol)
{
    require_vertex_level(grounding, "verify_long_exact_sequence");
    ExactnessReport report;
    const CochainComplex f = sheaf_cochain_complex(sheaf);
    const CochainComplex w = target_cochain_complex(sheaf.complex(), grounding.target_dim, grounding.target);
    const ChainMap eps = grounding_chain_map(sheaf, grounding);
    const CochainComplex cone = mapping_cone(f, w, eps);
    report.defect_norm = incidence_defect(sheaf, grounding).total_norm;
    report.hypotheses_met = chain_map_residual(f, w, eps) <= defect_tol;

    for (int n = f.lowest_degree(); n <= f.highest_degree(); ++n) {
        report.betti_base[n] = f.betti(n);
    }
    for (int n = w.lowest_degree(); n <= w.highest_degree(); ++n) {
        report.betti_target[n] = w.betti(n);
    }
    for (int n = cone.lowest_degree(); n <= cone.highest_degree(); ++n) {
        report.betti_cone[n] = cone.betti(n);
    }

    auto harmonic = [](const CochainComplex& c, int n) {
        Matrix h = c.harmonic_basis(n);
        if (h.rows() != c.dim(n)) {
            h = Matrix(c.dim(n), 0);
        }
        return h;
    };
    auto eps_at = [&](int n) {
        auto it = eps.find(n);
        return it == eps.end() ? Matrix(Matrix::Zero(w.dim(n), f.dim(n))) : it->second;
    };

    struct Space {
        std::string label;
        Matrix basis;
    };
    std::vector<Space> spaces;
    std::vector<Matrix> chain_maps; // chain_maps[i] : space i -> space i+1 at cochain level
    const int lo = cone.lowest_degree();
    const int hi = cone.highest_degree();
    for (int n = lo; n <= hi; ++n) {
        spaces.push_back({"H^" + std::to_string(n) + "(F)", harmonic(f, n)});
        spaces.push_back({"H^" + std::to_string(n) + "(W)", harmonic(w, n)});
        spaces.push_back({"H^" + std::to_string(n) + "(Cone)", harmonic(cone, n)});
        chain_maps.push_back(eps_at(n));
        Matrix incl = Matrix::Zero(cone.dim(n), w.dim(n));
        incl.bottomRows(w.dim(n)) = Matrix::Identity(w.dim(n), w.dim(n));
        chain_maps.push_back(std::move(incl));
        Matrix proj = Matrix::Zero(f.dim(n + 1), cone.dim(n));
        proj.leftCols(f.dim(n + 1)) = -Matrix::Identity(f.dim(n + 1), f.dim(n + 1));
        chain_maps.push_back(std::move(proj));
    }
    spaces.push_back({"H^" + std::to_string(hi + 1) + "(F)", harmonic(f, hi + 1)});

    std::vector<Matrix> induced;
    for (std::size_t i = 0; i < chain_maps.size(); ++i) {
        induced.push_back(spaces[i + 1].basis.transpose() * chain_maps[i] * spaces[i].basis);
    }
    report.exact = true;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        LesNode node;
        node.label = spaces[i].label;
        node.dim = spaces[i].basis.cols();
        const bool has_in = i > 0;
        const bool has_out = i < induced.size();
        node.rank_in = has_in ? numerical_rank(induced[i - 1]) : 0;
        node.rank_out = has_out ? numerical_rank(induced[i]) : 0;
        if (has_in && has_out) {
            const Matrix comp = induced[i] * induced[i - 1];
            node.composite_norm = comp.size() == 0 ? 0.0 : comp.norm();
        }
        node.exact = node.rank_in + node.rank_out == node.dim && node.composite_norm <= 1e-8;
        report.max_composite_norm = std::max(report.max_composite_norm, node.composite_norm);
        report.exact = report.exact && node.exact;
        report.nodes.push_back(std::move(node));
    }
    return report;
}

BlockDecompositionReport verify_block_decomposition(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                                    double coupling_tol, double spectral_tol)
{
    require_vertex_level(grounding, "verify_block_decomposition");
    const AlgebraicCone ac = algebraic_cone(sheaf, grounding);
    BlockDecompositionReport report;
    report.cone_laplacian = ac.cone.laplacian(0);
    const Index m = ac.base.dim(1);
    const Index k = ac.target.dim(0);
    report.upper_block = report.cone_laplacian.topLeftCorner(m, m);
    report.lower_block = report.cone_laplacian.bottomRightCorner(k, k);
    const Matrix coupling = report.cone_laplacian.topRightCorner(m, k);
    report.coupling_norm = coupling.size() == 0 ? 0.0 : coupling.norm();
    report.decoupled = report.coupling_norm < coupling_tol;

    const Spectrum whole = eigendecompose(report.cone_laplacian);
    std::vector<double> parts;
    for (const Matrix* block : {&report.upper_block, &report.lower_block}) {
        if (block->size() == 0) {
            continue;
        }
        const Spectrum s = eigendecompose(*block);
        parts.insert(parts.end(), s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
    }
    std::sort(parts.begin(), parts.end());
    for (Index i = 0; i < whole.eigenvalues.size(); ++i) {
        report.max_spectral_difference =
            std::max(report.max_spectral_difference, std::abs(whole.eigenvalues(i) - parts[static_cast<std::size_t>(i)]));
    }
    report.spectra_match = report.decoupled && report.max_spectral_difference < spectral_tol;
    return report;
}

} // namespace sheafgauge
