#include "sheafgauge/operators.hpp"
#include "sheafgauge/spectral.hpp"

#include <algorithm>

namespace sheafgauge {

CochainComplex::CochainComplex(int lowest_degree, std::vector<Index> dims, std::vector<Matrix> differentials)
    : lo_(lowest_degree), dims_(std::move(dims)), diffs_(std::move(differentials))
{
    if (dims_.empty()) {
        throw DimensionError("CochainComplex: at least one degree is required");
    }
    if (diffs_.size() + 1 != dims_.size()) {
        throw DimensionError("CochainComplex: " + std::to_string(diffs_.size()) + " differentials for " +
                             std::to_string(dims_.size()) + " degrees");
    }
    for (std::size_t i = 0; i < diffs_.size(); ++i) {
        if (diffs_[i].rows() != dims_[i + 1] || diffs_[i].cols() != dims_[i]) {
            throw DimensionError("CochainComplex: differential in degree " + std::to_string(lo_ + static_cast<int>(i)) +
                                 " has shape " + std::to_string(diffs_[i].rows()) + "x" +
                                 std::to_string(diffs_[i].cols()));
        }
    }
}

Index CochainComplex::dim(int n) const
{
    if (n < lo_ || n > highest_degree()) {
        return 0;
    }
    return dims_[static_cast<std::size_t>(n - lo_)];
}

Matrix CochainComplex::differential(int n) const
{
    if (n < lo_ || n >= highest_degree()) {
        return Matrix::Zero(dim(n + 1), dim(n));
    }
    return diffs_[static_cast<std::size_t>(n - lo_)];
}

double CochainComplex::square_residual() const
{
    double worst = 0.0;
    for (int n = lo_; n + 1 < highest_degree(); ++n) {
        worst = std::max(worst, (differential(n + 1) * differential(n)).norm());
    }
    return worst;
}

Matrix CochainComplex::laplacian(int n) const
{
    const Matrix down = differential(n - 1);
    const Matrix up = differential(n);
    Matrix l = down * down.transpose() + up.transpose() * up;
    return 0.5 * (l + l.transpose());
}

Matrix CochainComplex::harmonic_basis(int n) const
{
    if (dim(n) == 0) {
        return Matrix(0, 0);
    }
    const Spectrum s = eigendecompose(laplacian(n));
    return s.eigenvectors.leftCols(kernel_dim(s));
}

Index CochainComplex::betti(int n) const
{
    return dim(n) - numerical_rank(differential(n)) - numerical_rank(differential(n - 1));
}

CochainComplex sheaf_cochain_complex(const CellSheaf& sheaf)
{
    return CochainComplex(0, {sheaf.cochain_dim(0), sheaf.cochain_dim(1), sheaf.cochain_dim(2)},
                          {coboundary(sheaf, 0), coboundary(sheaf, 1)});
}

CochainComplex target_cochain_complex(const CliqueComplex& complex, Index target_dim, TargetKind target,
                                      bool augmented)
{
    if (target_dim < 0) {
        throw ConfigError("target_cochain_complex: negative target dimension");
    }
    if (target == TargetKind::DegreeZeroConcentrated) {
        return CochainComplex(0, {target_dim}, {});
    }
    const Index w = target_dim;
    std::vector<Index> dims;
    std::vector<Matrix> diffs;
    if (augmented) {
        dims.push_back(w);
        Matrix aug(w * complex.vertex_count(), w);
        for (Index v = 0; v < complex.vertex_count(); ++v) {
            aug.middleRows(v * w, w) = Matrix::Identity(w, w);
        }
        diffs.push_back(std::move(aug));
    }
    for (int n = 0; n < 3; ++n) {
        dims.push_back(w * complex.cell_count(n));
    }
    for (int n = 0; n < 2; ++n) {
        Matrix d = Matrix::Zero(w * complex.cell_count(n + 1), w * complex.cell_count(n));
        for (const Incidence& inc : complex.incidences(n + 1)) {
            d.block(inc.coface * w, inc.face * w, w, w) += static_cast<double>(inc.sign) * Matrix::Identity(w, w);
        }
        diffs.push_back(std::move(d));
    }
    return CochainComplex(augmented ? -1 : 0, std::move(dims), std::move(diffs));
}

ChainMap grounding_chain_map(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    if (grounding.mode != GroundingMode::VertexLevel) {
        throw ModeError("grounding_chain_map: requires a vertex-level grounding");
    }
    const Index w = grounding.target_dim;
    const CliqueComplex& cx = sheaf.complex();
    ChainMap eps;
    if (grounding.target == TargetKind::DegreeZeroConcentrated) {
        Matrix m = Matrix::Zero(w, sheaf.cochain_dim(0));
        for (Index v = 0; v < cx.vertex_count(); ++v) {
            const Matrix& block = grounding.cell_maps[0][static_cast<std::size_t>(v)];
            m.middleCols(sheaf.cochain_offset(0, v), block.cols()) = block;
        }
        eps[0] = std::move(m);
        return eps;
    }
    for (int n = 0; n < 3; ++n) {
        Matrix m = Matrix::Zero(w * cx.cell_count(n), sheaf.cochain_dim(n));
        for (Index c = 0; c < cx.cell_count(n); ++c) {
            const Matrix& block = grounding.cell_maps[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)];
            m.block(c * w, sheaf.cochain_offset(n, c), w, block.cols()) = block;
        }
        eps[n] = std::move(m);
    }
    return eps;
}

namespace {

Matrix chain_component(const ChainMap& eps, int n, Index rows, Index cols)
{
    auto it = eps.find(n);
    if (it == eps.end()) {
        return Matrix::Zero(rows, cols);
    }
    if (it->second.rows() != rows || it->second.cols() != cols) {
        throw DimensionError("chain map component in degree " + std::to_string(n) + " has shape " +
                             std::to_string(it->second.rows()) + "x" + std::to_string(it->second.cols()) +
                             ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    return it->second;
}

} // namespace

CochainComplex mapping_cone(const CochainComplex& base, const CochainComplex& target, const ChainMap& eps)
{
    const int lo = std::min(base.lowest_degree() - 1, target.lowest_degree());
    const int hi = std::max(base.highest_degree() - 1, target.highest_degree());
    std::vector<Index> dims;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        dims.push_back(base.dim(n + 1) + target.dim(n));
    }
    for (int n = lo; n < hi; ++n) {
        const Index fc = base.dim(n + 1);
        const Index wc = target.dim(n);
        const Index fr = base.dim(n + 2);
        const Index wr = target.dim(n + 1);
        Matrix d = Matrix::Zero(fr + wr, fc + wc);
        d.topLeftCorner(fr, fc) = -base.differential(n + 1);
        d.bottomLeftCorner(wr, fc) = -chain_component(eps, n + 1, wr, fc);
        d.bottomRightCorner(wr, wc) = target.differential(n);
        diffs.push_back(std::move(d));
    }
    return CochainComplex(lo, std::move(dims), std::move(diffs));
}

CochainComplex translated_cone(const CochainComplex& base, const CochainComplex& target, const ChainMap& eps)
{
    const int lo = std::min(base.lowest_degree(), target.lowest_degree() + 1);
    const int hi = std::max(base.highest_degree(), target.highest_degree() + 1);
    std::vector<Index> dims;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        dims.push_back(base.dim(n) + target.dim(n - 1));
    }
    for (int n = lo; n < hi; ++n) {
        const Index fc = base.dim(n);
        const Index wc = target.dim(n - 1);
        const Index fr = base.dim(n + 1);
        const Index wr = target.dim(n);
        Matrix d = Matrix::Zero(fr + wr, fc + wc);
        d.topLeftCorner(fr, fc) = base.differential(n);
        d.bottomLeftCorner(wr, fc) = chain_component(eps, n, wr, fc);
        d.bottomRightCorner(wr, wc) = -target.differential(n - 1);
        diffs.push_back(std::move(d));
    }
    return CochainComplex(lo, std::move(dims), std::move(diffs));
}

} // namespace sheafgauge
