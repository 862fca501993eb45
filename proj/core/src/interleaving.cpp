#include "sheafgauge/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sheafgauge {

namespace {

std::vector<double> distinct_levels(const Spectrum& s)
{
    std::vector<double> out(s.levels.data(), s.levels.data() + s.levels.size());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/** H_a(d) inside H_b(d + eta) for every level d of a. */
bool contained(const Spectrum& a, const Spectrum& b, double eta, double slack, double tol)
{
    for (double d : distinct_levels(a)) {
        const Matrix u = harmonic_space(a, d);
        const Matrix v = harmonic_space(b, d + eta + slack);
        if (u.cols() > v.cols()) {
            return false;
        }
        const Matrix residual = u - v * (v.transpose() * u);
        for (Index c = 0; c < residual.cols(); ++c) {
            if (residual.col(c).norm() > tol) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

InterleavingResult interleaving_shift(const Spectrum& a, const Spectrum& b, InterleavingMode mode,
                                      double containment_tol)
{
    InterleavingResult out;
    out.mode = mode;
    if (mode == InterleavingMode::Profile) {
        if (a.size() != b.size()) {
            out.eta = kInfinity;
            return out;
        }
        std::vector<double> la(a.levels.data(), a.levels.data() + a.size());
        std::vector<double> lb(b.levels.data(), b.levels.data() + b.size());
        std::sort(la.begin(), la.end());
        std::sort(lb.begin(), lb.end());
        for (std::size_t k = 0; k < la.size(); ++k) {
            out.eta = std::max(out.eta, std::abs(la[k] - lb[k]));
        }
        return out;
    }
    if (a.eigenvectors.rows() != b.eigenvectors.rows()) {
        throw DimensionError("interleaving_shift: subspace mode needs a common ambient space");
    }
    if (a.size() == 0) {
        return out;
    }
    const auto la = distinct_levels(a);
    const auto lb = distinct_levels(b);
    std::vector<double> candidates{0.0};
    for (double x : la) {
        for (double y : lb) {
            candidates.push_back(std::abs(x - y));
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    const double slack = 1e-12 * std::max({1.0, a.lambda_max, b.lambda_max});
    auto ok = [&](double eta) {
        return contained(a, b, eta, slack, containment_tol) && contained(b, a, eta, slack, containment_tol);
    };
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (ok(candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    out.eta = candidates[lo];
    return out;
}

InterleavingResult interleaving_shift(const Spectrum& a, const Spectrum& b)
{
    const bool same = a.eigenvectors.rows() == b.eigenvectors.rows();
    return interleaving_shift(a, b, same ? InterleavingMode::Subspace : InterleavingMode::Profile);
}

Matrix GroundedOperators::cone_operator() const
{
    const Index n = base_laplacian.rows();
    const Index p = target_laplacian.rows();
    if (grounding.rows() != p || grounding.cols() != n) {
        throw DimensionError("GroundedOperators: grounding shape does not match the operators");
    }
    Matrix op = Matrix::Zero(n + p, n + p);
    op.topLeftCorner(n, n) = base_laplacian + grounding.transpose() * grounding;
    op.bottomRightCorner(p, p) = target_laplacian + grounding * grounding.transpose();
    if (coupling.size() > 0) {
        if (coupling.rows() != n || coupling.cols() != p) {
            throw DimensionError("GroundedOperators: coupling shape does not match the operators");
        }
        op.topRightCorner(n, p) = coupling;
        op.bottomLeftCorner(p, n) = coupling.transpose();
    }
    return op;
}

GroundedOperators grounded_operators(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    const GroundingMorphism g = to_cochain_level(sheaf, grounding);
    GroundedOperators out;
    out.base_laplacian = laplacian(sheaf, 1).matrix;
    out.grounding = g.cochain_map;
    out.target_laplacian = Matrix::Zero(g.target_dim, g.target_dim);
    out.coupling = Matrix::Zero(out.base_laplacian.rows(), g.target_dim);
    return out;
}

namespace {

double commutator_norm(const Matrix& x, const Matrix& y)
{
    return x.size() == 0 ? 0.0 : (x * y - y * x).norm();
}

double max_pair_difference(const Spectrum& a, const Spectrum& b)
{
    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        for (Index j = 0; j < b.size(); ++j) {
            worst = std::max(worst, std::abs(a.eigenvalues(i) - b.eigenvalues(j)));
        }
    }
    return worst;
}

} // namespace

ConeReductionReport verify_cone_reduction(const GroundedOperators& a, const GroundedOperators& b,
                                          double hypothesis_tol, double slack)
{
    if (a.base_laplacian.rows() != b.base_laplacian.rows() || a.target_laplacian.rows() != b.target_laplacian.rows()) {
        throw DimensionError("verify_cone_reduction: both systems must share their cochain spaces");
    }
    ConeReductionReport report;
    for (const GroundedOperators* g : {&a, &b}) {
        report.coupling_residual = std::max(report.coupling_residual, g->coupling.size() ? g->coupling.norm() : 0.0);
        const Matrix gram_base = g->grounding.transpose() * g->grounding;
        const Matrix gram_target = g->grounding * g->grounding.transpose();
        report.commutator_residual = std::max({report.commutator_residual,
                                               commutator_norm(g->base_laplacian, gram_base),
                                               commutator_norm(g->target_laplacian, gram_target)});
    }
    report.hypotheses_met = report.coupling_residual < hypothesis_tol && report.commutator_residual < hypothesis_tol;
    if (!report.hypotheses_met) {
        return report;
    }
    auto sym = [](const Matrix& m) { return eigendecompose(Matrix(0.5 * (m + m.transpose()))); };
    const Spectrum fa = sym(a.base_laplacian);
    const Spectrum fb = sym(b.base_laplacian);
    const Spectrum wa = sym(a.target_laplacian);
    const Spectrum wb = sym(b.target_laplacian);
    const Spectrum ga = sym(a.grounding.transpose() * a.grounding);
    const Spectrum gb = sym(b.grounding.transpose() * b.grounding);
    const Spectrum ha = sym(a.grounding * a.grounding.transpose());
    const Spectrum hb = sym(b.grounding * b.grounding.transpose());
    const Spectrum ca = sym(a.cone_operator());
    const Spectrum cb = sym(b.cone_operator());

    report.eta = std::max(interleaving_shift(fa, fb, InterleavingMode::Subspace).eta,
                          interleaving_shift(wa, wb, InterleavingMode::Subspace).eta);
    report.v = std::max(max_pair_difference(ga, gb), max_pair_difference(ha, hb));
    report.theta = std::max(interleaving_shift(ga, gb, InterleavingMode::Subspace).eta,
                            interleaving_shift(ha, hb, InterleavingMode::Subspace).eta);
    report.cone_eta = interleaving_shift(ca, cb, InterleavingMode::Subspace).eta;
    const double tol = slack * std::max({1.0, ca.lambda_max, cb.lambda_max});
    report.bound_v_holds = report.cone_eta <= report.eta + report.v + tol;
    report.bound_theta_holds = report.cone_eta <= report.eta + report.theta + tol;
    return report;
}

} // namespace sheafgauge
