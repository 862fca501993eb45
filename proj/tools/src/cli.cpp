#include <sheafgauge_cli/cli.hpp>

#include <sheafgauge/operators.hpp>
#include <sheafgauge/parallel.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>

namespace sheafgauge::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"existence", "magnitude", "localization", "relativity"};
    return names;
}

/** Groundings accepted by verify: the diagnose set plus a random compatible vertex-level map. */
const std::vector<std::string>& verify_grounding_names()
{
    static const std::vector<std::string> names{"fullrank", "deficient", "padding", "zero", "compatible"};
    return names;
}

std::string join(const std::vector<std::string>& names)
{
    std::string s;
    for (const auto& n : names) {
        s += (s.empty() ? "" : ", ") + n;
    }
    return s;
}

/** Holds the output directory and the list of files written, in order. */
class Outputs {
public:
    explicit Outputs(const std::string& dir) : dir_(dir)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw InputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        }
    }

    void write(const std::string& name, const std::string& content)
    {
        write_file_atomic(dir_ / name, content);
        written_.push_back((dir_ / name).string());
    }

    void json(const std::string& name, const Json& j) { write(name, dump_json(j)); }

    const std::vector<std::string>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

CellSheaf load_sheaf(const RunConfig& c)
{
    if (!c.input.empty() && c.generator) {
        throw InputError("--input and --generator are mutually exclusive");
    }
    if (!c.input.empty()) {
        return sheaf_from_json(parse_json(read_text_file(c.input), c.input));
    }
    if (!c.generator) {
        throw InputError("either --input SHEAF.json or --generator NAME is required");
    }
    return make_generator(generator_params(c));
}

DiagnosticsConfig diagnostics_config(const RunConfig& c)
{
    DiagnosticsConfig d;
    d.normalize = c.normalize;
    d.delta0 = c.delta0;
    d.delta1 = c.delta1;
    d.weight = c.weight;
    d.heat_time = c.heat_time;
    return d;
}

GroundingMorphism verify_grounding(const CellSheaf& sheaf, const RunConfig& c)
{
    if (c.grounding == "padding") {
        return grounding_from_padding(sheaf, GroundingMode::VertexLevel, TargetKind::Constant);
    }
    if (c.grounding == "compatible") {
        return random_compatible_grounding(sheaf, sheaf.max_ambient_dim(), c.seed);
    }
    if (c.grounding == "zero") {
        const Index w = sheaf.max_ambient_dim();
        std::array<std::vector<Matrix>, 3> maps;
        for (int d = 0; d < 3; ++d) {
            for (const Stalk& s : sheaf.stalks(d)) {
                maps[static_cast<std::size_t>(d)].push_back(Matrix::Zero(w, s.dim()));
            }
        }
        return vertex_grounding(sheaf, std::move(maps));
    }
    return make_grounding(sheaf, parse_grounding_kind(c.grounding));
}

int cmd_build(const RunConfig& c, Outputs& out, std::ostream& log)
{
    if (c.input.empty() || c.features.empty()) {
        throw InputError("build requires --input GRAPH.json and --features FEATURES.json");
    }
    c.pipeline.validate();
    const Graph graph = graph_from_json(parse_json(read_text_file(c.input), c.input));
    const FeatureMap features = features_from_json(parse_json(read_text_file(c.features), c.features));
    const CellSheaf sheaf = build_sheaf_from_features(graph, features, c.pipeline);
    const SheafValidationReport report = validate_sheaf(sheaf, c.pipeline.functoriality_tol);
    out.json("validation.json", to_json(report));
    if (!report.ok) {
        log << "functoriality check failed on " << report.violations.size() << " incidence pairs; triangles:";
        Index last = -1;
        for (const auto& v : report.violations) {
            if (v.triangle != last) {
                log << ' ' << v.triangle;
                last = v.triangle;
            }
        }
        log << '\n';
        return ValidationFailure;
    }
    out.json("sheaf.json", sheaf_to_json(sheaf));
    return Ok;
}

int cmd_diagnose(const RunConfig& c, Outputs& out, std::ostream&)
{
    const CellSheaf sheaf = load_sheaf(c);
    const GroundingMorphism grounding = make_grounding(sheaf, parse_grounding_kind(c.grounding));
    const DiagnosticsReport report = run_diagnostics(sheaf, grounding, diagnostics_config(c));
    Json j = to_json(report);
    j["grounding"] = c.grounding;
    out.json("report.json", j);
    out.write("spectra.csv", spectra_csv(report));
    out.write("witness_vertex.csv", witness_csv(report.vertex_map));
    out.write("witness_edge.csv", witness_csv(report.edge_map));
    out.write("witness_relative.csv", witness_csv(report.relative_map));
    return Ok;
}

int cmd_dump(const RunConfig& c, Outputs& out, std::ostream&)
{
    const CellSheaf sheaf = load_sheaf(c);
    const ChannelSet ch = channel_set(sheaf, make_grounding(sheaf, parse_grounding_kind(c.grounding)));
    Json ops = Json::array();
    for (const SheafLaplacian* op : {&ch.local_feasibility, &ch.intrinsic, &ch.relative, &ch.utilization}) {
        ops.push_back(operator_to_json(*op));
    }
    ops.push_back(operator_to_json(coboundary(sheaf, 0), 0, to_string(Provenance::Base), "d0"));
    ops.push_back(operator_to_json(coboundary(sheaf, 1), 1, to_string(Provenance::Base), "d1"));
    out.json("operators.json", Json{{"schema_version", kSchemaVersion},
                                    {"kind", "operators"},
                                    {"grounding", c.grounding},
                                    {"operators", ops}});
    return Ok;
}

LocalWitnessMap energy_map(const std::vector<double>& energy, double delta)
{
    LocalWitnessMap m;
    m.degree = 1;
    m.delta = delta;
    m.scores = energy;
    return m;
}

int cmd_experiment(const RunConfig& c, Outputs& out, std::ostream&)
{
    const std::string& name = c.experiment;
    if (name == "existence") {
        out.json("report.json", to_json(experiment_existence(c.n, c.stalk_dim > 0 ? c.stalk_dim : 1)));
    } else if (name == "relativity") {
        out.json("report.json", to_json(experiment_relativity(c.n, c.stalk_dim > 0 ? c.stalk_dim : 1)));
    } else if (name == "magnitude") {
        out.json("report.json", to_json(experiment_magnitude(c.n, c.tau, c.sigma, c.seed, c.link_strength)));
    } else if (name == "localization") {
        LocalizationConfig lc;
        lc.delta = c.delta;
        const LocalizationResult r = experiment_localization(c.n, c.tau, c.sigma, c.seed, lc, c.link_strength);
        out.json("report.json", to_json(r));
        const std::pair<const char*, const LocalizationMaps*> rows[] = {{"twist", &r.twist}, {"noisy", &r.noisy}};
        for (const auto& [label, maps] : rows) {
            const std::string prefix = std::string("heatmap_") + label;
            out.write(prefix + "_j0.csv", witness_csv(maps->vertex_map));
            out.write(prefix + "_j0_edges.csv", witness_csv(energy_map(maps->edge_energy, r.delta)));
            out.write(prefix + "_j1.csv", witness_csv(maps->edge_map));
            out.write(prefix + "_relative.csv", witness_csv(maps->relative_map));
        }
    } else {
        throw InputError("unknown experiment '" + name + "'; valid experiments: " + join(experiment_names()));
    }
    if (c.seeds > 1 && (name == "magnitude" || name == "localization")) {
        out.json("ensemble.json", to_json(run_ensemble(c.n, c.tau, c.sigma, c.seed, c.seeds, c.link_strength)));
    }
    return Ok;
}

Json check(const std::string& name, const std::string& status, Json details)
{
    details["check"] = name;
    details["status"] = status;
    return details;
}

int cmd_verify(const RunConfig& c, Outputs& out, std::ostream& log)
{
    const CellSheaf sheaf = load_sheaf(c);
    const GroundingMorphism grounding = verify_grounding(sheaf, c);
    const bool vertex_level = grounding.mode == GroundingMode::VertexLevel;
    Json checks = Json::array();

    const Json needs_vertex{{"reason", "requires a vertex-level grounding"}};
    if (vertex_level) {
        const ConeEquivalenceReport eq = verify_cone_equivalence(sheaf, grounding);
        checks.push_back(check("cone_equivalence",
                               !eq.hypotheses_met ? "hypothesis-not-met" : (eq.passed ? "pass" : "fail"), to_json(eq)));
        const ExactnessReport les = verify_long_exact_sequence(sheaf, grounding);
        checks.push_back(check("long_exact_sequence",
                               !les.hypotheses_met ? "hypothesis-not-met" : (les.exact ? "pass" : "fail"),
                               to_json(les)));
        const BlockDecompositionReport block = verify_block_decomposition(sheaf, grounding);
        checks.push_back(check("block_decomposition",
                               !block.decoupled ? "hypothesis-not-met" : (block.spectra_match ? "pass" : "fail"),
                               to_json(block)));
    } else {
        checks.push_back(check("cone_equivalence", "hypothesis-not-met", needs_vertex));
        checks.push_back(check("long_exact_sequence", "hypothesis-not-met", needs_vertex));
        checks.push_back(check("block_decomposition", "hypothesis-not-met", needs_vertex));
    }

    const GroundingMorphism cochain = vertex_level ? to_cochain_level(sheaf, grounding) : grounding;
    const SeparationReport sep = separation_check(sheaf, cochain);
    checks.push_back(check("separation", sep.consistent ? "pass" : "fail", to_json(sep)));

    const GroundedOperators a = grounded_operators(sheaf, cochain);
    GroundedOperators b = a;
    b.grounding *= c.reduction_scale;
    const ConeReductionReport red = verify_cone_reduction(a, b);
    Json red_json = to_json(red);
    red_json["reduction_scale"] = c.reduction_scale;
    checks.push_back(check("cone_reduction",
                           !red.hypotheses_met ? "hypothesis-not-met"
                                               : (red.bound_v_holds && red.bound_theta_holds ? "pass" : "fail"),
                           red_json));

    bool failed = false;
    for (const Json& ch : checks) {
        if (ch["status"] == "fail") {
            failed = true;
            log << "check " << ch["check"].get<std::string>() << " failed\n";
        }
    }
    out.json("certificates.json", Json{{"schema_version", kSchemaVersion},
                                       {"kind", "certificates"},
                                       {"grounding", c.grounding},
                                       {"checks", checks},
                                       {"passed", !failed}});
    return failed ? VerificationFailure : Ok;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    static const std::map<std::string, std::function<int(const RunConfig&, Outputs&, std::ostream&)>> commands{
        {"build", cmd_build},           {"diagnose", cmd_diagnose}, {"experiment", cmd_experiment},
        {"verify", cmd_verify},         {"dump", cmd_dump}};
    const auto it = commands.find(c.command);
    if (it == commands.end()) {
        throw InputError("unknown command '" + c.command + "'");
    }
    if (c.command == "experiment" &&
        std::find(experiment_names().begin(), experiment_names().end(), c.experiment) == experiment_names().end()) {
        throw InputError("unknown experiment '" + c.experiment + "'; valid experiments: " + join(experiment_names()));
    }
    if (c.seeds < 1) {
        throw ConfigError("--seeds must be at least 1");
    }
    Outputs outputs(c.out);
    const int code = it->second(c, outputs, err);
    outputs.json("run_config.json", to_json(c));
    for (const auto& path : outputs.written()) {
        out << path << '\n';
    }
    return code;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const IncidenceError*>(&e) ||
        dynamic_cast<const DimensionError*>(&e) || dynamic_cast<const NumericalError*>(&e)) {
        return ValidationFailure;
    }
    return InputFailure;
}

void add_sheaf_source(CLI::App* cmd, RunConfig& c)
{
    cmd->add_option("--input", c.input, "Serialized sheaf JSON");
    cmd->add_option("--generator", c.generator, "Named generator")->check(CLI::IsMember(generator_names()));
    cmd->add_option("--n", c.n, "Cycle length for generators")->check(CLI::PositiveNumber);
    cmd->add_option("--stalk-dim", c.stalk_dim, "Stalk dimension (0 selects the generator default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tau", c.tau, "Hidden twist angle");
    cmd->add_option("--sigma", c.sigma, "Restriction noise level")->check(CLI::NonNegativeNumber);
    cmd->add_option("--link-strength", c.link_strength, "Hidden twist defect edge strength")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Random seed");
}

void add_witness_options(CLI::App* cmd, RunConfig& c)
{
    cmd->add_option("--delta0", c.delta0, "Witness window start");
    cmd->add_option("--delta1", c.delta1, "Witness window end");
    cmd->add_option("--weight", c.weight, "Witness weight")
        ->transform(CLI::CheckedTransformer(std::map<std::string, WitnessWeight>{{"unif", WitnessWeight::Uniform},
                                                                                 {"inv", WitnessWeight::Inverse},
                                                                                 {"heat", WitnessWeight::Heat},
                                                                                 {"gap", WitnessWeight::GapIndicator}}));
    cmd->add_option("--heat-time", c.heat_time, "Heat kernel time")->check(CLI::PositiveNumber);
    cmd->add_flag("--normalize", c.normalize, "Scale each channel to unit trace per rank");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    std::string replay_path;
    CLI::App app{"Spectral consistency diagnostics for cellular sheaves"};
    app.require_subcommand(1);
    app.add_option("--out", c.out, "Output directory")->capture_default_str();

    CLI::App* build = app.add_subcommand("build", "Build a sheaf from a graph and vertex features");
    build->add_option("--input", c.input, "Graph JSON")->required();
    build->add_option("--features", c.features, "Feature JSON")->required();
    build->add_option("--svd-tol", c.pipeline.svd_tol, "Relative singular value cutoff");
    build->add_option("--edge-align-tol", c.pipeline.edge_align_tol, "Principal cosine cutoff");
    build->add_option("--tri-eig-tol", c.pipeline.tri_eig_tol, "Triangle projector eigenvalue cutoff");
    build->add_option("--tri-exponent", c.pipeline.tri_exponent, "Triangle eigenvalue exponent");
    build->add_option("--functoriality-tol", c.pipeline.functoriality_tol, "Functoriality defect tolerance");

    CLI::App* diagnose = app.add_subcommand("diagnose", "Four-channel spectral report");
    add_sheaf_source(diagnose, c);
    diagnose->add_option("--grounding", c.grounding, "Grounding")->check(CLI::IsMember(grounding_names()));
    add_witness_options(diagnose, c);

    CLI::App* experiment = app.add_subcommand("experiment", "Run a named experiment");
    experiment->add_option("name", c.experiment, "One of: " + join(experiment_names()))->required();
    add_sheaf_source(experiment, c);
    experiment->add_option("--seeds", c.seeds, "Ensemble size for magnitude and localization");
    experiment->add_option("--delta", c.delta, "Localization witness threshold");

    CLI::App* verify = app.add_subcommand("verify", "Check cone, exact sequence and separation certificates");
    add_sheaf_source(verify, c);
    verify->add_option("--grounding", c.grounding, "Grounding")->check(CLI::IsMember(verify_grounding_names()));
    verify->add_option("--reduction-scale", c.reduction_scale, "Grounding scale of the comparison system");

    CLI::App* dump = app.add_subcommand("dump", "Write the channel operators and coboundaries");
    add_sheaf_source(dump, c);
    dump->add_option("--grounding", c.grounding, "Grounding")->check(CLI::IsMember(grounding_names()));

    CLI::App* replay = app.add_subcommand("replay", "Re-run a saved run_config.json");
    replay->add_option("config", replay_path, "Path to run_config.json")->required();

    for (CLI::App* sub : {build, diagnose, experiment, verify, dump}) {
        sub->add_option("--out", c.out, "Output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return InputFailure;
    }

    try {
        if (replay->parsed()) {
            c = run_config_from_json(parse_json(read_text_file(replay_path), replay_path));
        } else {
            c.command = app.get_subcommands().front()->get_name();
        }
        return dispatch(c, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

} // namespace sheafgauge::cli
