#pragma once

#include "sheafgauge/operators.hpp"
#include "sheafgauge/sheaf.hpp"
#include "sheafgauge/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sheafgauge {

/** Witness window and normalization policy shared by all channels. */
struct DiagnosticsConfig {
    bool normalize = false;
    std::optional<double> delta0;
    std::optional<double> delta1; ///< default: twice the channel's spectral gap
    WitnessWeight weight = WitnessWeight::GapIndicator;
    double heat_time = 1.0;
};

struct ChannelSummary {
    std::string name;
    std::string operator_label;
    bool auxiliary = false;
    Index dimension = 0;
    Index kernel_dim = 0;
    double lambda_min = 0.0;
    double spectral_gap = kInfinity;
    double normalized_gap = kInfinity;
    double global_witness = 0.0;
    WitnessConfig witness;
    bool normalized = false;
    bool zero_operator = false;
    std::vector<double> spectrum; ///< raw ascending eigenvalues
};

struct DiagnosticsReport {
    ChannelSummary local_feasibility;
    ChannelSummary intrinsic;
    ChannelSummary relative;
    ChannelSummary utilization;
    std::optional<double> defect_norm; ///< present for vertex-level groundings
    LocalWitnessMap vertex_map;        ///< L0 witness per vertex
    LocalWitnessMap edge_map;          ///< L1 witness per edge
    LocalWitnessMap relative_map;      ///< relative-channel witness per edge

    std::vector<const ChannelSummary*> channels() const
    {
        return {&local_feasibility, &intrinsic, &relative, &utilization};
    }
};

/** Four-channel report; vertex-level groundings are converted to cochain level for the channels. */
DiagnosticsReport run_diagnostics(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                  const DiagnosticsConfig& config = {});

struct SeparationReport {
    Index relative_kernel = 0;    ///< dim ker(L1 + eps^T eps)
    Index harmonic_dim = 0;       ///< dim ker L1
    Index restricted_kernel = 0;  ///< dim ker(eps restricted to ker L1)
    Index intersection_dim = 0;   ///< dim(ker(L1 + eps^T eps) intersected with ker L1)
    bool a = false;
    bool b = false;
    bool c = false;
    bool consistent = false;
    std::optional<double> gamma; ///< relative-channel gap when eps is injective on ker L1
};

/** Rank-based check of the three equivalent kernel conditions. */
SeparationReport separation_check(const CellSheaf& sheaf, const GroundingMorphism& grounding);

/** Named generator sheaves with their documented defaults. */
struct GeneratorParams {
    std::string name = "trivial"; ///< trivial | mobius | hidden-twist | noisy-trivial
    Index n = 10;
    Index stalk_dim = 0; ///< 0 selects the default: 1 for trivial and mobius, 2 otherwise
    double tau = 0.3;
    double link_strength = 0.1;
    double sigma = 0.25;
    std::uint64_t seed = 0;
};

const std::vector<std::string>& generator_names();
CellSheaf make_generator(const GeneratorParams& params);

enum class GroundingKind { FullRank, Deficient, Padding, Zero };

const std::vector<std::string>& grounding_names();
GroundingKind parse_grounding_kind(const std::string& name);
std::string to_string(GroundingKind kind);
/** Cochain-level grounding of the requested kind. */
GroundingMorphism make_grounding(const CellSheaf& sheaf, GroundingKind kind);

struct ExistenceRow {
    std::string label;
    double lambda_min = 0.0;
    Index kernel_dim = 0;
    double spectral_gap = kInfinity;
};

struct ExistenceResult {
    Index n = 10;
    Index stalk_dim = 1;
    ExistenceRow trivial;
    ExistenceRow mobius;
    bool verdict = false;
};

ExistenceResult experiment_existence(Index n = 10, Index stalk_dim = 1);

struct MagnitudeRow {
    std::string label;
    double spectral_gap = kInfinity;    ///< raw lambda_min^+
    double normalized_gap = kInfinity;  ///< after trace/rank normalization
    double witness = 0.0;               ///< gap-based global witness on the normalized spectrum
    Index kernel_dim = 0;
    bool excluded = false;              ///< nonzero kernel removes the row from the comparison
};

struct MagnitudeResult {
    Index n = 10;
    double tau = 0.3;
    double link_strength = 0.1;
    double sigma = 0.25;
    std::uint64_t seed = 0;
    MagnitudeRow twist;
    MagnitudeRow noisy;
    bool verdict = false; ///< twist normalized gap below noisy normalized gap
};

MagnitudeResult experiment_magnitude(Index n = 10, double tau = 0.3, double sigma = 0.25, std::uint64_t seed = 0,
                                     double link_strength = 0.1);

struct LocalizationConfig {
    std::optional<double> delta; ///< default 0.9 * 2 (1 - cos(pi / n))
    WitnessWeight weight = WitnessWeight::Uniform;
};

struct LocalizationMaps {
    LocalWitnessMap vertex_map;   ///< base j = 0
    std::vector<double> edge_energy; ///< j = 0 coface energy per edge
    LocalWitnessMap edge_map;     ///< base j = 1
    LocalWitnessMap relative_map; ///< relative channel, padding grounding
    double participation_ratio = 0.0;
    Index argmax_edge = 0;
};

struct LocalizationResult {
    Index n = 10;
    double tau = 0.3;
    double link_strength = 0.1;
    double sigma = 0.25;
    std::uint64_t seed = 0;
    double delta = 0.0;
    Index defect_edge = 0;
    LocalizationMaps twist;
    LocalizationMaps noisy;
    bool verdict = false;
};

LocalizationResult experiment_localization(Index n = 10, double tau = 0.3, double sigma = 0.25,
                                           std::uint64_t seed = 0, const LocalizationConfig& config = {},
                                           double link_strength = 0.1);

struct RelativityRow {
    std::string label;
    double lambda_min = 0.0;
    Index kernel_dim = 0;
};

struct RelativityResult {
    Index n = 10;
    Index stalk_dim = 1;
    RelativityRow full_rank;
    RelativityRow deficient;
    double base_channel_difference = 0.0; ///< max entrywise difference of L0 and L1 across the pair
    bool verdict = false;
};

RelativityResult experiment_relativity(Index n = 10, Index stalk_dim = 1);

/** Per-seed magnitude and localization outcomes over seeds first..first+count-1. */
struct EnsembleResult {
    std::vector<MagnitudeResult> magnitude;
    std::vector<LocalizationResult> localization;
    double gap_order_fraction = 0.0;
    double argmax_fraction = 0.0;
    double participation_fraction = 0.0;
};

EnsembleResult run_ensemble(Index n, double tau, double sigma, std::uint64_t first_seed, Index count,
                            double link_strength = 0.1);

} // namespace sheafgauge
