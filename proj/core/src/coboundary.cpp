#include "sheafgauge/operators.hpp"

#include <cmath>

namespace sheafgauge {

std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::Base: return "base";
    case Provenance::GeometricCone: return "geometric-cone";
    case Provenance::AlgebraicCone: return "algebraic-cone";
    case Provenance::Relative: return "relative";
    case Provenance::Utilization: return "utilization";
    }
    return "unknown";
}

Matrix coboundary(const CellSheaf& sheaf, int j)
{
    if (j != 0 && j != 1) {
        throw ConfigError("coboundary: degree must be 0 or 1, got " + std::to_string(j));
    }
    const CliqueComplex& cx = sheaf.complex();
    Matrix d = Matrix::Zero(sheaf.cochain_dim(j + 1), sheaf.cochain_dim(j));
    const auto incs = cx.incidences(j + 1);
    for (std::size_t k = 0; k < incs.size(); ++k) {
        const Incidence& inc = incs[k];
        const Matrix& rho = sheaf.restriction(j + 1, static_cast<Index>(k));
        if (rho.size() == 0) {
            continue;
        }
        d.block(sheaf.cochain_offset(j + 1, inc.coface), sheaf.cochain_offset(j, inc.face), rho.rows(),
                rho.cols()) += static_cast<double>(inc.sign) * rho;
    }
    return d;
}

SheafLaplacian laplacian(const CellSheaf& sheaf, int j)
{
    if (j != 0 && j != 1) {
        throw ConfigError("laplacian: degree must be 0 or 1, got " + std::to_string(j));
    }
    SheafLaplacian out;
    out.degree = j;
    out.provenance = Provenance::Base;
    out.label = "L" + std::to_string(j);
    const Matrix up = coboundary(sheaf, j);
    out.matrix = up.transpose() * up;
    if (j == 1) {
        const Matrix down = coboundary(sheaf, 0);
        out.matrix += down * down.transpose();
    }
    return out;
}

double consistency_energy(const SheafLaplacian& laplacian, const Vector& x)
{
    if (x.size() != laplacian.dim()) {
        throw DimensionError("consistency_energy: cochain of length " + std::to_string(x.size()) +
                             " for operator of size " + std::to_string(laplacian.dim()));
    }
    return x.dot(laplacian.matrix * x);
}

bool is_delta_feasible(const SheafLaplacian& laplacian, const Vector& x, double delta)
{
    if (!(delta >= 0.0)) {
        throw ConfigError("is_delta_feasible: delta must be non-negative");
    }
    return consistency_energy(laplacian, x) <= delta;
}

Index numerical_rank(const Matrix& m, double rel_tol)
{
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    const double cutoff = rel_tol * std::max(1.0, s(0));
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) {
            ++r;
        }
    }
    return r;
}

} // namespace sheafgauge
