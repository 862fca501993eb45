#include "sheafgauge/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace sheafgauge {

namespace {

struct ChannelData {
    ChannelSummary summary;
    Spectrum used;
};

ChannelData summarize(const std::string& name, const SheafLaplacian& op, bool auxiliary,
                      const DiagnosticsConfig& config)
{
    ChannelData out;
    ChannelSummary& c = out.summary;
    c.name = name;
    c.operator_label = op.label;
    c.auxiliary = auxiliary;
    c.dimension = op.dim();
    const Spectrum raw = eigendecompose(op);
    c.kernel_dim = kernel_dim(raw);
    c.lambda_min = lambda_min(raw);
    c.spectral_gap = spectral_gap(raw);
    bool zero = false;
    const Spectrum norm = normalized(raw, &zero);
    c.zero_operator = zero;
    c.normalized_gap = spectral_gap(norm);
    c.normalized = config.normalize && !zero;
    out.used = config.normalize ? norm : raw;
    const double gap = spectral_gap(out.used);
    c.witness.delta0 = config.delta0.value_or(0.0);
    c.witness.delta1 = config.delta1.value_or(std::isfinite(gap) ? 2.0 * gap : 1.0);
    c.witness.weight = config.weight;
    c.witness.heat_time = config.heat_time;
    c.global_witness = global_witness(out.used, c.witness);
    c.spectrum.assign(raw.eigenvalues.data(), raw.eigenvalues.data() + raw.size());
    return out;
}

} // namespace

DiagnosticsReport run_diagnostics(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                  const DiagnosticsConfig& config)
{
    DiagnosticsReport report;
    if (grounding.mode == GroundingMode::VertexLevel) {
        report.defect_norm = incidence_defect(sheaf, grounding).total_norm;
    }
    const GroundingMorphism g = to_cochain_level(sheaf, grounding);
    const ChannelSet ch = channel_set(sheaf, g);
    const ChannelData l0 = summarize("local_feasibility", ch.local_feasibility, false, config);
    const ChannelData l1 = summarize("intrinsic", ch.intrinsic, false, config);
    const ChannelData rel = summarize("relative", ch.relative, false, config);
    const ChannelData util = summarize("utilization", ch.utilization, true, config);
    report.local_feasibility = l0.summary;
    report.intrinsic = l1.summary;
    report.relative = rel.summary;
    report.utilization = util.summary;

    const Matrix d0 = coboundary(sheaf, 0);
    const Matrix d1 = coboundary(sheaf, 1);
    report.vertex_map = local_witness(sheaf, 0, l0.used, d0, Matrix(0, 0), l0.summary.witness);
    report.edge_map = local_witness(sheaf, 1, l1.used, d1, d0, l1.summary.witness);
    report.relative_map = local_witness(sheaf, 1, rel.used, d1, d0, rel.summary.witness);
    return report;
}

SeparationReport separation_check(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    if (grounding.mode != GroundingMode::CochainLevel) {
        throw ModeError("separation_check: grounding is vertex-level; convert it with to_cochain_level first");
    }
    const ChannelSet ch = channel_set(sheaf, grounding);
    const Spectrum intrinsic = eigendecompose(ch.intrinsic);
    const Spectrum relative = eigendecompose(ch.relative);
    SeparationReport r;
    r.harmonic_dim = kernel_dim(intrinsic);
    r.relative_kernel = kernel_dim(relative);
    const Matrix h = intrinsic.eigenvectors.leftCols(r.harmonic_dim);
    const Matrix k = relative.eigenvectors.leftCols(r.relative_kernel);
    r.restricted_kernel = r.harmonic_dim - numerical_rank(ch.grounding * h);
    Matrix joint(h.rows(), h.cols() + k.cols());
    joint << h, k;
    r.intersection_dim = r.harmonic_dim + r.relative_kernel - numerical_rank(joint);
    r.a = r.relative_kernel > 0;
    r.b = r.restricted_kernel > 0;
    r.c = r.intersection_dim > 0;
    r.consistent = r.a == r.b && r.b == r.c && r.relative_kernel == r.restricted_kernel &&
                   r.restricted_kernel == r.intersection_dim;
    if (r.restricted_kernel == 0) {
        r.gamma = spectral_gap(relative);
    }
    return r;
}

const std::vector<std::string>& generator_names()
{
    static const std::vector<std::string> names{"trivial", "mobius", "hidden-twist", "noisy-trivial"};
    return names;
}

CellSheaf make_generator(const GeneratorParams& params)
{
    const bool rank_two = params.name == "hidden-twist" || params.name == "noisy-trivial";
    const Index k = params.stalk_dim > 0 ? params.stalk_dim : (rank_two ? 2 : 1);
    if (params.name == "trivial") {
        return trivial_bundle(params.n, k);
    }
    if (params.name == "mobius") {
        return mobius_bundle(params.n, k);
    }
    if (params.name == "hidden-twist") {
        if (k != 2) {
            throw ConfigError("hidden-twist generator has stalk dimension 2, got " + std::to_string(k));
        }
        return hidden_twist_bundle({params.n, params.tau, params.link_strength});
    }
    if (params.name == "noisy-trivial") {
        return noisy_trivial_bundle(params.n, k, params.sigma, params.seed);
    }
    std::string valid;
    for (const auto& n : generator_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw ConfigError("unknown generator '" + params.name + "'; valid generators: " + valid);
}

const std::vector<std::string>& grounding_names()
{
    static const std::vector<std::string> names{"fullrank", "deficient", "padding", "zero"};
    return names;
}

GroundingKind parse_grounding_kind(const std::string& name)
{
    if (name == "fullrank") {
        return GroundingKind::FullRank;
    }
    if (name == "deficient") {
        return GroundingKind::Deficient;
    }
    if (name == "padding") {
        return GroundingKind::Padding;
    }
    if (name == "zero") {
        return GroundingKind::Zero;
    }
    throw ConfigError("unknown grounding '" + name + "'; valid groundings: fullrank, deficient, padding, zero");
}

std::string to_string(GroundingKind kind)
{
    switch (kind) {
    case GroundingKind::FullRank: return "fullrank";
    case GroundingKind::Deficient: return "deficient";
    case GroundingKind::Padding: return "padding";
    case GroundingKind::Zero: return "zero";
    }
    return "unknown";
}

GroundingMorphism make_grounding(const CellSheaf& sheaf, GroundingKind kind)
{
    switch (kind) {
    case GroundingKind::FullRank: return full_rank_grounding(sheaf);
    case GroundingKind::Deficient: return deficient_grounding(sheaf);
    case GroundingKind::Padding: return grounding_from_padding(sheaf, GroundingMode::CochainLevel);
    case GroundingKind::Zero: return zero_grounding(sheaf, sheaf.cochain_dim(1));
    }
    throw ConfigError("unknown grounding kind");
}

} // namespace sheafgauge
