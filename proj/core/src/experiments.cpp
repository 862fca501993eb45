#include "sheafgauge/diagnostics.hpp"
#include "sheafgauge/parallel.hpp"

#include <cmath>
#include <numbers>

namespace sheafgauge {

namespace {

ExistenceRow existence_row(const std::string& label, const CellSheaf& sheaf)
{
    const Spectrum s = eigendecompose(laplacian(sheaf, 0));
    return ExistenceRow{label, lambda_min(s), kernel_dim(s), spectral_gap(s)};
}

MagnitudeRow magnitude_row(const std::string& label, const CellSheaf& sheaf)
{
    MagnitudeRow row;
    row.label = label;
    const Spectrum raw = eigendecompose(laplacian(sheaf, 0));
    row.kernel_dim = kernel_dim(raw);
    row.spectral_gap = spectral_gap(raw);
    const Spectrum norm = normalized(raw);
    row.normalized_gap = spectral_gap(norm);
    row.witness = global_witness(norm, default_witness_config(norm));
    row.excluded = row.kernel_dim > 0;
    return row;
}

LocalizationMaps localization_maps(const CellSheaf& sheaf, const WitnessConfig& cfg)
{
    LocalizationMaps maps;
    const Matrix d0 = coboundary(sheaf, 0);
    const Matrix d1 = coboundary(sheaf, 1);
    maps.vertex_map = local_witness(sheaf, 0, eigendecompose(laplacian(sheaf, 0)), d0, Matrix(0, 0), cfg);
    maps.edge_energy = maps.vertex_map.coface_energy;
    maps.edge_map = local_witness(sheaf, 1, eigendecompose(laplacian(sheaf, 1)), d1, d0, cfg);
    const ChannelSet ch = channel_set(sheaf, grounding_from_padding(sheaf, GroundingMode::CochainLevel));
    maps.relative_map = local_witness(sheaf, 1, eigendecompose(ch.relative), d1, d0, cfg);
    maps.participation_ratio = participation_ratio(maps.edge_energy);
    maps.argmax_edge = argmax(maps.edge_energy);
    return maps;
}

} // namespace

ExistenceResult experiment_existence(Index n, Index stalk_dim)
{
    ExistenceResult r;
    r.n = n;
    r.stalk_dim = stalk_dim;
    r.trivial = existence_row("trivial", trivial_bundle(n, stalk_dim));
    r.mobius = existence_row("mobius", mobius_bundle(n, stalk_dim));
    r.verdict = r.trivial.kernel_dim == stalk_dim && r.mobius.kernel_dim == 0;
    return r;
}

MagnitudeResult experiment_magnitude(Index n, double tau, double sigma, std::uint64_t seed, double link_strength)
{
    MagnitudeResult r;
    r.n = n;
    r.tau = tau;
    r.sigma = sigma;
    r.seed = seed;
    r.link_strength = link_strength;
    r.twist = magnitude_row("hidden-twist", hidden_twist_bundle({n, tau, link_strength}));
    r.noisy = magnitude_row("noisy-trivial", noisy_trivial_bundle(n, 2, sigma, seed));
    r.verdict = !r.twist.excluded && !r.noisy.excluded && r.twist.normalized_gap < r.noisy.normalized_gap;
    return r;
}

LocalizationResult experiment_localization(Index n, double tau, double sigma, std::uint64_t seed,
                                           const LocalizationConfig& config, double link_strength)
{
    LocalizationResult r;
    r.n = n;
    r.tau = tau;
    r.sigma = sigma;
    r.seed = seed;
    r.link_strength = link_strength;
    r.delta = config.delta.value_or(0.9 * 2.0 * (1.0 - std::cos(std::numbers::pi / static_cast<double>(n))));
    WitnessConfig cfg;
    cfg.delta0 = 0.0;
    cfg.delta1 = r.delta;
    cfg.weight = config.weight;
    const CellSheaf twist = hidden_twist_bundle({n, tau, link_strength});
    const Edge defect = closing_edge(n);
    r.defect_edge = *twist.complex().find_edge(defect[0], defect[1]);
    r.twist = localization_maps(twist, cfg);
    r.noisy = localization_maps(noisy_trivial_bundle(n, 2, sigma, seed), cfg);
    r.verdict = r.twist.argmax_edge == r.defect_edge &&
                r.twist.participation_ratio < r.noisy.participation_ratio;
    return r;
}

RelativityResult experiment_relativity(Index n, Index stalk_dim)
{
    RelativityResult r;
    r.n = n;
    r.stalk_dim = stalk_dim;
    const CellSheaf sheaf = trivial_bundle(n, stalk_dim);
    const ChannelSet full = channel_set(sheaf, full_rank_grounding(sheaf));
    const ChannelSet deficient = channel_set(sheaf, deficient_grounding(sheaf));
    const Spectrum sf = eigendecompose(full.relative);
    const Spectrum sd = eigendecompose(deficient.relative);
    r.full_rank = RelativityRow{"full-rank", lambda_min(sf), kernel_dim(sf)};
    r.deficient = RelativityRow{"rank-deficient", lambda_min(sd), kernel_dim(sd)};
    r.base_channel_difference =
        std::max((full.local_feasibility.matrix - deficient.local_feasibility.matrix).cwiseAbs().maxCoeff(),
                 (full.intrinsic.matrix - deficient.intrinsic.matrix).cwiseAbs().maxCoeff());
    const Index harmonic = kernel_dim(eigendecompose(full.intrinsic));
    r.verdict = r.full_rank.kernel_dim == 0 && harmonic > 0 && r.deficient.kernel_dim == harmonic &&
                r.base_channel_difference == 0.0;
    return r;
}

EnsembleResult run_ensemble(Index n, double tau, double sigma, std::uint64_t first_seed, Index count,
                            double link_strength)
{
    if (count <= 0) {
        throw ConfigError("run_ensemble: count must be positive");
    }
    EnsembleResult r;
    r.magnitude.resize(static_cast<std::size_t>(count));
    r.localization.resize(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
        const std::uint64_t seed = first_seed + i;
        r.magnitude[i] = experiment_magnitude(n, tau, sigma, seed, link_strength);
        r.localization[i] = experiment_localization(n, tau, sigma, seed, {}, link_strength);
    });
    double gap = 0;
    double arg = 0;
    double pr = 0;
    for (std::size_t i = 0; i < r.magnitude.size(); ++i) {
        gap += r.magnitude[i].verdict ? 1 : 0;
        arg += r.localization[i].twist.argmax_edge == r.localization[i].defect_edge ? 1 : 0;
        pr += r.localization[i].twist.participation_ratio < r.localization[i].noisy.participation_ratio ? 1 : 0;
    }
    const double c = static_cast<double>(count);
    r.gap_order_fraction = gap / c;
    r.argmax_fraction = arg / c;
    r.participation_fraction = pr / c;
    return r;
}

} // namespace sheafgauge
