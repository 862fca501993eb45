#include "sheafgauge/operators.hpp"
#include "sheafgauge/random.hpp"
#include "sheafgauge/spectral.hpp"

#include <cmath>

namespace sheafgauge {

namespace {

Matrix padded_basis(const Stalk& s, Index rows)
{
    Matrix m = Matrix::Zero(rows, s.dim());
    m.topRows(s.ambient_dim()) = s.basis;
    return m;
}

} // namespace

GroundingMorphism vertex_grounding(const CellSheaf& sheaf, std::array<std::vector<Matrix>, 3> maps,
                                   TargetKind target)
{
    GroundingMorphism g;
    g.mode = GroundingMode::VertexLevel;
    g.target = target;
    g.target_dim = -1;
    for (int d = 0; d < 3; ++d) {
        const auto& list = maps[static_cast<std::size_t>(d)];
        if (static_cast<Index>(list.size()) != sheaf.complex().cell_count(d)) {
            throw DimensionError("vertex_grounding: " + std::to_string(list.size()) + " maps for " +
                                 std::to_string(sheaf.complex().cell_count(d)) + " cells of dimension " +
                                 std::to_string(d));
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (g.target_dim < 0) {
                g.target_dim = list[i].rows();
            }
            if (list[i].rows() != g.target_dim || list[i].cols() != sheaf.stalk_dim(d, static_cast<Index>(i))) {
                throw DimensionError("vertex_grounding: map on cell " + std::to_string(i) + " of dimension " +
                                     std::to_string(d) + " has shape " + std::to_string(list[i].rows()) + "x" +
                                     std::to_string(list[i].cols()));
            }
        }
    }
    if (g.target_dim < 0) {
        g.target_dim = 0;
    }
    g.cell_maps = std::move(maps);
    return g;
}

GroundingMorphism cochain_grounding(const CellSheaf& sheaf, Matrix map)
{
    if (map.cols() != sheaf.cochain_dim(1)) {
        throw DimensionError("cochain_grounding: map has " + std::to_string(map.cols()) +
                             " columns, C^1 has dimension " + std::to_string(sheaf.cochain_dim(1)));
    }
    GroundingMorphism g;
    g.mode = GroundingMode::CochainLevel;
    g.target = TargetKind::Constant;
    g.target_dim = map.rows();
    g.cochain_map = std::move(map);
    return g;
}

GroundingMorphism grounding_from_padding(const CellSheaf& sheaf, GroundingMode mode, TargetKind target)
{
    const Index ambient = sheaf.max_ambient_dim();
    if (mode == GroundingMode::CochainLevel) {
        Matrix eps = Matrix::Zero(ambient, sheaf.cochain_dim(1));
        for (Index e = 0; e < sheaf.complex().cell_count(1); ++e) {
            const Stalk& s = sheaf.stalk(1, e);
            eps.block(0, sheaf.cochain_offset(1, e), ambient, s.dim()) = padded_basis(s, ambient);
        }
        return cochain_grounding(sheaf, std::move(eps));
    }
    std::array<std::vector<Matrix>, 3> maps;
    for (int d = 0; d < 3; ++d) {
        for (const Stalk& s : sheaf.stalks(d)) {
            maps[static_cast<std::size_t>(d)].push_back(padded_basis(s, ambient));
        }
    }
    GroundingMorphism g = vertex_grounding(sheaf, std::move(maps), target);
    g.target_dim = ambient;
    return g;
}

GroundingMorphism full_rank_grounding(const CellSheaf& sheaf)
{
    const Index m = sheaf.cochain_dim(1);
    return cochain_grounding(sheaf, Matrix::Identity(m, m));
}

GroundingMorphism deficient_grounding(const CellSheaf& sheaf)
{
    const Spectrum s = eigendecompose(laplacian(sheaf, 1).matrix);
    const Index k = kernel_dim(s);
    const Index m = s.eigenvectors.cols();
    return cochain_grounding(sheaf, s.eigenvectors.rightCols(m - k).transpose());
}

GroundingMorphism zero_grounding(const CellSheaf& sheaf, Index target_dim)
{
    if (target_dim < 0) {
        throw ConfigError("zero_grounding: negative target dimension");
    }
    return cochain_grounding(sheaf, Matrix::Zero(target_dim, sheaf.cochain_dim(1)));
}

Matrix compatible_cosections(const CellSheaf& sheaf)
{
    const CliqueComplex& cx = sheaf.complex();
    std::array<Index, 3> base{0, sheaf.cochain_dim(0), sheaf.cochain_dim(0) + sheaf.cochain_dim(1)};
    const Index total = base[2] + sheaf.cochain_dim(2);
    Index rows = 0;
    for (int d = 1; d <= 2; ++d) {
        for (const Incidence& inc : cx.incidences(d)) {
            rows += sheaf.stalk_dim(d - 1, inc.face);
        }
    }
    Matrix a = Matrix::Zero(rows, total);
    Index r = 0;
    for (int d = 1; d <= 2; ++d) {
        const auto incs = cx.incidences(d);
        for (std::size_t k = 0; k < incs.size(); ++k) {
            const Matrix& rho = sheaf.restriction(d, static_cast<Index>(k));
            const Index kf = rho.cols();
            const Index kc = rho.rows();
            const Index face_col = base[static_cast<std::size_t>(d - 1)] + sheaf.cochain_offset(d - 1, incs[k].face);
            const Index coface_col = base[static_cast<std::size_t>(d)] + sheaf.cochain_offset(d, incs[k].coface);
            a.block(r, coface_col, kf, kc) += rho.transpose();
            a.block(r, face_col, kf, kf) -= Matrix::Identity(kf, kf);
            r += kf;
        }
    }
    if (total == 0) {
        return Matrix(0, 0);
    }
    if (rows == 0) {
        return Matrix::Identity(total, total);
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, s(0));
    Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) {
        ++rank;
    }
    return svd.matrixV().rightCols(total - rank);
}

GroundingMorphism random_compatible_grounding(const CellSheaf& sheaf, Index target_dim, std::uint64_t seed)
{
    if (target_dim < 0) {
        throw ConfigError("random_compatible_grounding: negative target dimension");
    }
    const Matrix null = compatible_cosections(sheaf);
    Rng rng(seed);
    const Matrix coeffs = rng.gaussian(null.cols(), target_dim);
    const Matrix rows = (null * coeffs).transpose();
    std::array<std::vector<Matrix>, 3> maps;
    Index base = 0;
    for (int d = 0; d < 3; ++d) {
        for (Index c = 0; c < sheaf.complex().cell_count(d); ++c) {
            const Index k = sheaf.stalk_dim(d, c);
            maps[static_cast<std::size_t>(d)].push_back(rows.middleCols(base + sheaf.cochain_offset(d, c), k));
        }
        base += sheaf.cochain_dim(d);
    }
    GroundingMorphism g = vertex_grounding(sheaf, std::move(maps), TargetKind::Constant);
    g.target_dim = target_dim;
    return g;
}

GroundingMorphism to_cochain_level(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    if (grounding.mode == GroundingMode::CochainLevel) {
        return grounding;
    }
    Matrix eps = Matrix::Zero(grounding.target_dim, sheaf.cochain_dim(1));
    for (Index e = 0; e < sheaf.complex().cell_count(1); ++e) {
        const Matrix& m = grounding.cell_maps[1][static_cast<std::size_t>(e)];
        eps.middleCols(sheaf.cochain_offset(1, e), m.cols()) = m;
    }
    return cochain_grounding(sheaf, std::move(eps));
}

IncidenceDefect incidence_defect(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    if (grounding.mode != GroundingMode::VertexLevel) {
        throw ModeError("incidence_defect: requires a vertex-level grounding");
    }
    const CliqueComplex& cx = sheaf.complex();
    IncidenceDefect out;
    double sq = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const auto incs = cx.incidences(d);
        auto& blocks = out.blocks[static_cast<std::size_t>(d - 1)];
        for (std::size_t k = 0; k < incs.size(); ++k) {
            const Matrix& rho = sheaf.restriction(d, static_cast<Index>(k));
            const Matrix& eps_tau = grounding.cell_maps[static_cast<std::size_t>(d)][static_cast<std::size_t>(incs[k].coface)];
            const Matrix& eps_sigma = grounding.cell_maps[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(incs[k].face)];
            const double sign = static_cast<double>(incs[k].sign);
            Matrix block = sign * (eps_tau * rho);
            if (grounding.target == TargetKind::Constant) {
                block -= sign * eps_sigma;
            }
            const double n = block.norm();
            sq += n * n;
            out.max_block_norm = std::max(out.max_block_norm, n);
            blocks.push_back(std::move(block));
        }
    }
    out.total_norm = std::sqrt(sq);
    return out;
}

} // namespace sheafgauge
