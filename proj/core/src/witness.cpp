#include "sheafgauge/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sheafgauge {

void WitnessConfig::validate() const
{
    if (!(delta0 >= 0.0) || !(delta1 > delta0) || !std::isfinite(delta1)) {
        throw ConfigError("witness: need 0 <= delta0 < delta1, got delta0 = " + std::to_string(delta0) +
                          ", delta1 = " + std::to_string(delta1));
    }
    if (weight == WitnessWeight::Heat && !(heat_time > 0.0)) {
        throw ConfigError("witness: heat time must be positive");
    }
}

std::string to_string(WitnessWeight weight)
{
    switch (weight) {
    case WitnessWeight::Uniform: return "unif";
    case WitnessWeight::Inverse: return "inv";
    case WitnessWeight::Heat: return "heat";
    case WitnessWeight::GapIndicator: return "gap";
    }
    return "unknown";
}

WitnessWeight parse_witness_weight(const std::string& name)
{
    if (name == "unif") {
        return WitnessWeight::Uniform;
    }
    if (name == "inv") {
        return WitnessWeight::Inverse;
    }
    if (name == "heat") {
        return WitnessWeight::Heat;
    }
    if (name == "gap") {
        return WitnessWeight::GapIndicator;
    }
    throw ConfigError("unknown witness weight '" + name + "'; valid weights: unif, inv, heat, gap");
}

double witness_weight(WitnessWeight weight, double lambda, double heat_time)
{
    switch (weight) {
    case WitnessWeight::Uniform: return 1.0;
    case WitnessWeight::Inverse: return 1.0 / lambda;
    case WitnessWeight::Heat: return std::exp(-heat_time * lambda);
    case WitnessWeight::GapIndicator: return 1.0;
    }
    return 1.0;
}

double global_witness(const Spectrum& s, const WitnessConfig& config)
{
    config.validate();
    if (config.weight == WitnessWeight::GapIndicator) {
        const double gap = spectral_gap(s);
        return gap <= config.delta1 ? config.delta1 - std::max(config.delta0, gap) : 0.0;
    }
    double total = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
        const double lambda = s.eigenvalues(i);
        if (lambda > s.zero_threshold && lambda <= config.delta1) {
            total += (config.delta1 - std::max(config.delta0, lambda)) *
                     witness_weight(config.weight, lambda, config.heat_time);
        }
    }
    return total;
}

WitnessConfig default_witness_config(const Spectrum& s)
{
    WitnessConfig cfg;
    cfg.delta0 = 0.0;
    const double gap = spectral_gap(s);
    cfg.delta1 = std::isfinite(gap) ? 2.0 * gap : 1.0;
    cfg.weight = WitnessWeight::GapIndicator;
    return cfg;
}

LocalWitnessMap local_witness(const CellSheaf& sheaf, int j, const Spectrum& s, const Matrix& up,
                              const Matrix& down, const WitnessConfig& config)
{
    config.validate();
    if (j != 0 && j != 1) {
        throw ConfigError("local_witness: degree must be 0 or 1");
    }
    const CliqueComplex& cx = sheaf.complex();
    if (s.eigenvectors.rows() != sheaf.cochain_dim(j) || up.cols() != sheaf.cochain_dim(j) ||
        up.rows() != sheaf.cochain_dim(j + 1)) {
        throw DimensionError("local_witness: operator does not act on C^" + std::to_string(j));
    }
    if (j == 1 && (down.rows() != sheaf.cochain_dim(1) || down.cols() != sheaf.cochain_dim(0))) {
        throw DimensionError("local_witness: d_0 has the wrong shape");
    }
    LocalWitnessMap out;
    out.degree = j;
    out.delta = config.delta1;
    out.scores.assign(static_cast<std::size_t>(cx.cell_count(j)), 0.0);
    out.coface_energy.assign(static_cast<std::size_t>(cx.cell_count(j + 1)), 0.0);
    out.face_energy.assign(static_cast<std::size_t>(j > 0 ? cx.cell_count(j - 1) : 0), 0.0);

    std::vector<double> weights;
    const double gap = spectral_gap(s);
    for (Index i = 0; i < s.size(); ++i) {
        if (s.eigenvalues(i) <= s.zero_threshold) {
            continue;
        }
        if (config.weight == WitnessWeight::GapIndicator) {
            if (gap <= config.delta1 && s.levels(i) == s.levels(kernel_dim(s))) {
                out.admitted_modes.push_back(i);
                weights.push_back(1.0);
            }
        } else if (s.levels(i) <= config.delta1) {
            out.admitted_modes.push_back(i);
            weights.push_back(witness_weight(config.weight, s.eigenvalues(i), config.heat_time));
        }
    }

    for (std::size_t m = 0; m < out.admitted_modes.size(); ++m) {
        const Index i = out.admitted_modes[m];
        const double w = weights[m];
        const Vector v = s.eigenvectors.col(i);
        out.weighted_energy += w * s.eigenvalues(i);
        const Vector dv = up * v;
        for (Index c = 0; c < cx.cell_count(j + 1); ++c) {
            out.coface_energy[static_cast<std::size_t>(c)] +=
                w * dv.segment(sheaf.cochain_offset(j + 1, c), sheaf.stalk_dim(j + 1, c)).squaredNorm();
        }
        if (j > 0) {
            const Vector dtv = down.transpose() * v;
            for (Index b = 0; b < cx.cell_count(j - 1); ++b) {
                out.face_energy[static_cast<std::size_t>(b)] +=
                    w * dtv.segment(sheaf.cochain_offset(j - 1, b), sheaf.stalk_dim(j - 1, b)).squaredNorm();
            }
        }
    }

    const auto incs_up = cx.incidences(j + 1);
    for (const Incidence& inc : incs_up) {
        out.scores[static_cast<std::size_t>(inc.face)] += out.coface_energy[static_cast<std::size_t>(inc.coface)];
    }
    if (j > 0) {
        for (const Incidence& inc : cx.incidences(j)) {
            out.scores[static_cast<std::size_t>(inc.coface)] += out.face_energy[static_cast<std::size_t>(inc.face)];
        }
    }
    return out;
}

LocalWitnessMap local_witness(const CellSheaf& sheaf, int j, const WitnessConfig& config)
{
    const SheafLaplacian l = laplacian(sheaf, j);
    const Spectrum s = eigendecompose(l);
    const Matrix up = coboundary(sheaf, j);
    const Matrix down = j > 0 ? coboundary(sheaf, j - 1) : Matrix(0, 0);
    return local_witness(sheaf, j, s, up, down, config);
}

double participation_ratio(const std::vector<double>& scores)
{
    double sum = 0.0;
    double sq = 0.0;
    for (double x : scores) {
        sum += x;
        sq += x * x;
    }
    return sq > 0.0 ? sum * sum / sq : 0.0;
}

Index argmax(const std::vector<double>& scores)
{
    if (scores.empty()) {
        throw ConfigError("argmax: empty score map");
    }
    return static_cast<Index>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

} // namespace sheafgauge
