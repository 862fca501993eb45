#pragma once

#include <sheafgauge/diagnostics.hpp>
#include <sheafgauge/io.hpp>
#include <sheafgauge/sheaf.hpp>
#include <sheafgauge/spectral.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace sheafgauge::cli {

enum ExitCode : int { Ok = 0, InputFailure = 1, ValidationFailure = 2, VerificationFailure = 3 };

/** Everything a single invocation depends on. */
struct RunConfig {
    std::string command;
    std::string experiment;
    std::string input;
    std::string features;
    std::optional<std::string> generator;
    Index n = 10;
    Index stalk_dim = 0;
    double tau = 0.3;
    double sigma = 0.25;
    double link_strength = 0.1;
    std::uint64_t seed = 0;
    Index seeds = 1;
    std::string grounding = "fullrank";
    FeaturePipelineConfig pipeline;
    std::optional<double> delta0;
    std::optional<double> delta1;
    std::optional<double> delta;
    WitnessWeight weight = WitnessWeight::GapIndicator;
    double heat_time = 1.0;
    bool normalize = false;
    double reduction_scale = 0.5;
    std::string out = ".";
    int format_version = kSchemaVersion;

    bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& config);
/** Throws SchemaError on a version mismatch and InputError on malformed fields. */
RunConfig run_config_from_json(const Json& j);

GeneratorParams generator_params(const RunConfig& config);

/** Parses argv, runs one command and returns its exit code. Messages go to out and err. */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sheafgauge::cli
