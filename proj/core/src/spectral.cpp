#include "sheafgauge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sheafgauge {

double zero_threshold(double lambda_max)
{
    return 1e-10 + 1e-8 * std::max(lambda_max, 0.0);
}

namespace {

void assign_levels(Spectrum& s)
{
    const Index n = s.size();
    s.cluster.assign(static_cast<std::size_t>(n), 0);
    s.levels = Vector::Zero(n);
    const double spread = 1e-8 * s.lambda_max;
    Index id = 0;
    for (Index i = 0; i < n; ++i) {
        if (i > 0 && !(s.eigenvalues(i) - s.eigenvalues(i - 1) < spread)) {
            ++id;
        }
        s.cluster[static_cast<std::size_t>(i)] = id;
    }
    Index start = 0;
    while (start < n) {
        Index end = start;
        while (end < n && s.cluster[static_cast<std::size_t>(end)] == s.cluster[static_cast<std::size_t>(start)]) {
            ++end;
        }
        double floor = kInfinity;
        for (Index i = start; i < end; ++i) {
            if (s.eigenvalues(i) > s.zero_threshold) {
                floor = std::min(floor, s.eigenvalues(i));
            }
        }
        for (Index i = start; i < end; ++i) {
            s.levels(i) = s.eigenvalues(i) > s.zero_threshold ? floor : 0.0;
        }
        start = end;
    }
}

} // namespace

Spectrum eigendecompose(const Matrix& laplacian)
{
    if (laplacian.rows() != laplacian.cols()) {
        throw DimensionError("eigendecompose: operator is " + std::to_string(laplacian.rows()) + "x" +
                             std::to_string(laplacian.cols()));
    }
    Spectrum s;
    const Index n = laplacian.rows();
    if (n == 0) {
        s.eigenvalues = Vector(0);
        s.eigenvectors = Matrix(0, 0);
        s.zero_threshold = zero_threshold(0.0);
        s.levels = Vector(0);
        return s;
    }
    if (!laplacian.allFinite()) {
        throw NumericalError("eigendecompose: operator has non-finite entries");
    }
    const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
    const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        std::ostringstream os;
        os << "eigendecompose: operator is not symmetric (max asymmetry " << asym << ")";
        throw NumericalError(os.str());
    }
    const Matrix sym = 0.5 * (laplacian + laplacian.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: eigensolver did not converge");
    }
    s.eigenvalues = eig.eigenvalues();
    s.eigenvectors = eig.eigenvectors();
    s.lambda_max = std::max(0.0, s.eigenvalues(n - 1));
    if (s.eigenvalues(0) < -1e-8 * std::max(s.lambda_max, 1e-300) && s.eigenvalues(0) < -1e-14 * scale) {
        std::ostringstream os;
        os << "eigendecompose: operator is not positive semidefinite (eigenvalue " << s.eigenvalues(0) << ")";
        throw NumericalError(os.str());
    }
    s.eigenvalues = s.eigenvalues.cwiseMax(0.0);
    s.zero_threshold = zero_threshold(s.lambda_max);
    assign_levels(s);
    return s;
}

Spectrum eigendecompose(const SheafLaplacian& laplacian)
{
    return eigendecompose(laplacian.matrix);
}

Spectrum scaled(const Spectrum& s, double factor)
{
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ConfigError("scaled: factor must be positive and finite");
    }
    Spectrum out = s;
    out.eigenvalues *= factor;
    out.levels *= factor;
    out.lambda_max *= factor;
    out.zero_threshold *= factor;
    return out;
}

Spectrum shifted(const Spectrum& s, double shift)
{
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw ConfigError("shifted: shift must be non-negative and finite");
    }
    Spectrum out = s;
    out.eigenvalues.array() += shift;
    out.levels.array() += shift;
    out.lambda_max += shift;
    return out;
}

Index kernel_dim(const Spectrum& s)
{
    Index k = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s.eigenvalues(i) <= s.zero_threshold) {
            ++k;
        }
    }
    return k;
}

double spectral_gap(const Spectrum& s)
{
    for (Index i = 0; i < s.size(); ++i) {
        if (s.eigenvalues(i) > s.zero_threshold) {
            return s.eigenvalues(i);
        }
    }
    return kInfinity;
}

double lambda_min(const Spectrum& s)
{
    return s.size() == 0 ? 0.0 : s.eigenvalues(0);
}

Index harmonic_dim(const Spectrum& s, double delta)
{
    Index k = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s.levels(i) <= delta) {
            ++k;
        }
    }
    return k;
}

Matrix harmonic_space(const Spectrum& s, double delta)
{
    if (!(delta >= 0.0)) {
        throw ConfigError("harmonic_space: delta must be non-negative");
    }
    std::vector<Index> keep;
    for (Index i = 0; i < s.size(); ++i) {
        if (s.levels(i) <= delta) {
            keep.push_back(i);
        }
    }
    Matrix basis(s.eigenvectors.rows(), static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        basis.col(static_cast<Index>(j)) = s.eigenvectors.col(keep[j]);
    }
    return basis;
}

bool is_almost_non_exact(const Spectrum& s, double probe_delta)
{
    if (!(probe_delta > 0.0)) {
        throw ConfigError("is_almost_non_exact: probe delta must be positive");
    }
    return kernel_dim(s) == 0 && harmonic_dim(s, probe_delta) > 0;
}

std::vector<Index> indicator_profile(const Spectrum& s, const std::vector<double>& grid)
{
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw ConfigError("indicator_profile: grid must be ascending");
    }
    std::vector<Index> out;
    out.reserve(grid.size());
    for (double d : grid) {
        out.push_back(harmonic_dim(s, d));
    }
    return out;
}

Spectrum normalized(const Spectrum& s, bool* zero_operator)
{
    const Index rank = s.size() - kernel_dim(s);
    const double trace = s.eigenvalues.sum();
    if (rank == 0 || !(trace > 0.0)) {
        if (zero_operator) {
            *zero_operator = true;
        }
        return s;
    }
    if (zero_operator) {
        *zero_operator = false;
    }
    return scaled(s, static_cast<double>(rank) / trace);
}

NormalizedOperator normalize_spectrum(const SheafLaplacian& laplacian)
{
    const Spectrum s = eigendecompose(laplacian.matrix);
    NormalizedOperator out;
    out.op = laplacian;
    const Index rank = s.size() - kernel_dim(s);
    const double trace = s.eigenvalues.sum();
    if (rank == 0 || !(trace > 0.0)) {
        out.zero_operator = true;
        return out;
    }
    out.scale = static_cast<double>(rank) / trace;
    out.op.matrix *= out.scale;
    return out;
}

} // namespace sheafgauge
