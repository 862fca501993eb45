#include <sheafgauge_cli/cli.hpp>

namespace sheafgauge::cli {

namespace {

Json optional_number(const std::optional<double>& x)
{
    return x ? Json(*x) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j, const char* key)
{
    const Json& v = j.at(key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<double>();
}

} // namespace

Json to_json(const RunConfig& c)
{
    const Json pipeline{{"svd_tol", c.pipeline.svd_tol},
                        {"edge_align_tol", c.pipeline.edge_align_tol},
                        {"tri_eig_tol", c.pipeline.tri_eig_tol},
                        {"tri_exponent", c.pipeline.tri_exponent},
                        {"functoriality_tol", c.pipeline.functoriality_tol}};
    const Json witness{{"delta0", optional_number(c.delta0)},
                       {"delta1", optional_number(c.delta1)},
                       {"delta", optional_number(c.delta)},
                       {"weight", to_string(c.weight)},
                       {"heat_time", c.heat_time}};
    return Json{{"schema_version", c.format_version},
                {"kind", "run_config"},
                {"command", c.command},
                {"experiment", c.experiment},
                {"input", c.input},
                {"features", c.features},
                {"generator", c.generator ? Json(*c.generator) : Json(nullptr)},
                {"n", c.n},
                {"stalk_dim", c.stalk_dim},
                {"tau", c.tau},
                {"sigma", c.sigma},
                {"link_strength", c.link_strength},
                {"seed", c.seed},
                {"seeds", c.seeds},
                {"grounding", c.grounding},
                {"pipeline", pipeline},
                {"witness", witness},
                {"normalize", c.normalize},
                {"reduction_scale", c.reduction_scale},
                {"out", c.out}};
}

RunConfig run_config_from_json(const Json& j)
{
    require_schema(j, "run config");
    try {
        RunConfig c;
        c.format_version = j.at("schema_version").get<int>();
        c.command = j.at("command").get<std::string>();
        c.experiment = j.at("experiment").get<std::string>();
        c.input = j.at("input").get<std::string>();
        c.features = j.at("features").get<std::string>();
        if (!j.at("generator").is_null()) {
            c.generator = j.at("generator").get<std::string>();
        }
        c.n = j.at("n").get<Index>();
        c.stalk_dim = j.at("stalk_dim").get<Index>();
        c.tau = j.at("tau").get<double>();
        c.sigma = j.at("sigma").get<double>();
        c.link_strength = j.at("link_strength").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.seeds = j.at("seeds").get<Index>();
        c.grounding = j.at("grounding").get<std::string>();
        const Json& p = j.at("pipeline");
        c.pipeline.svd_tol = p.at("svd_tol").get<double>();
        c.pipeline.edge_align_tol = p.at("edge_align_tol").get<double>();
        c.pipeline.tri_eig_tol = p.at("tri_eig_tol").get<double>();
        c.pipeline.tri_exponent = p.at("tri_exponent").get<double>();
        c.pipeline.functoriality_tol = p.at("functoriality_tol").get<double>();
        const Json& w = j.at("witness");
        c.delta0 = read_optional(w, "delta0");
        c.delta1 = read_optional(w, "delta1");
        c.delta = read_optional(w, "delta");
        c.weight = parse_witness_weight(w.at("weight").get<std::string>());
        c.heat_time = w.at("heat_time").get<double>();
        c.normalize = j.at("normalize").get<bool>();
        c.reduction_scale = j.at("reduction_scale").get<double>();
        c.out = j.at("out").get<std::string>();
        return c;
    } catch (const Json::exception& e) {
        throw InputError(std::string("run config: ") + e.what());
    }
}

GeneratorParams generator_params(const RunConfig& c)
{
    GeneratorParams params;
    params.name = c.generator.value_or("trivial");
    params.n = c.n;
    params.stalk_dim = c.stalk_dim;
    params.tau = c.tau;
    params.sigma = c.sigma;
    params.link_strength = c.link_strength;
    params.seed = c.seed;
    return params;
}

} // namespace sheafgauge::cli
