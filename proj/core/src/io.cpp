#include "sheafgauge/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sheafgauge {

Json parse_json(const std::string& text, const std::string& what)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(what + ": malformed JSON at byte offset " + std::to_string(e.byte) + ": " + e.what());
    }
}

void require_schema(const Json& payload, const std::string& what)
{
    if (!payload.is_object() || !payload.contains("schema_version")) {
        throw SchemaError(what + ": missing schema_version");
    }
    const Json& v = payload.at("schema_version");
    if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion) {
        throw SchemaError(what + ": unsupported schema_version " + v.dump() + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
}

namespace {

Index require_integer(const Json& j, const std::string& what)
{
    if (!j.is_number_integer()) {
        throw InputError(what + " must be an integer, got " + j.dump());
    }
    return static_cast<Index>(j.get<long long>());
}

const Json& require_field(const Json& j, const char* key, const std::string& what)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(what + ": missing field '" + key + "'");
    }
    return j.at(key);
}

double require_number(const Json& j, const std::string& what)
{
    if (!j.is_number()) {
        throw InputError(what + " must be a number, got " + j.dump());
    }
    return j.get<double>();
}

} // namespace

Graph graph_from_json(const Json& j)
{
    Graph g;
    g.vertex_count = require_integer(require_field(j, "vertices", "graph"), "graph: 'vertices'");
    const Json& edges = require_field(j, "edges", "graph");
    if (!edges.is_array()) {
        throw InputError("graph: 'edges' must be an array");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Json& e = edges[i];
        const std::string where = "graph: edge #" + std::to_string(i) + " " + e.dump();
        if (!e.is_array() || e.size() != 2) {
            throw InputError(where + " must be a pair [u, v]");
        }
        g.edges.push_back({require_integer(e[0], where), require_integer(e[1], where)});
    }
    validate_graph(g);
    return g;
}

Json graph_to_json(const Graph& g)
{
    Json edges = Json::array();
    for (const Edge& e : g.edges) {
        edges.push_back({e[0], e[1]});
    }
    return Json{{"vertices", g.vertex_count}, {"edges", edges}};
}

FeatureMap features_from_json(const Json& j)
{
    const Json& obj = require_field(j, "features", "features");
    if (!obj.is_object()) {
        throw InputError("features: 'features' must be an object keyed by vertex id");
    }
    FeatureMap out;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& key = it.key();
        long long v = -1;
        const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
        if (ec != std::errc{} || ptr != key.data() + key.size() || v < 0) {
            throw InputError("features: key '" + key + "' is not a vertex id");
        }
        const std::string where = "features: vertex " + key;
        const Json& rows = it.value();
        if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
            throw InputError(where + " has an empty feature matrix");
        }
        const std::size_t cols = rows[0].size();
        Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != cols) {
                throw InputError(where + ": row " + std::to_string(r) + " has the wrong length");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Index>(r), static_cast<Index>(c)) = require_number(rows[r][c], where + " entry");
            }
        }
        out[static_cast<Index>(v)] = std::move(m);
    }
    return out;
}

Json features_to_json(const FeatureMap& features)
{
    Json obj = Json::object();
    for (const auto& [v, m] : features) {
        Json rows = Json::array();
        for (Index r = 0; r < m.rows(); ++r) {
            Json row = Json::array();
            for (Index c = 0; c < m.cols(); ++c) {
                row.push_back(m(r, c));
            }
            rows.push_back(row);
        }
        obj[std::to_string(v)] = rows;
    }
    return Json{{"features", obj}};
}

Json matrix_to_json(const Matrix& m)
{
    Json data = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            data.push_back(m(r, c));
        }
    }
    return Json{{"shape", {m.rows(), m.cols()}}, {"data", data}};
}

Matrix matrix_from_json(const Json& j, const std::string& what)
{
    const Json& shape = require_field(j, "shape", what);
    const Json& data = require_field(j, "data", what);
    if (!shape.is_array() || shape.size() != 2 || !data.is_array()) {
        throw InputError(what + ": expected 'shape' [rows, cols] and a 'data' array");
    }
    const Index rows = require_integer(shape[0], what + " rows");
    const Index cols = require_integer(shape[1], what + " cols");
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
        throw InputError(what + ": data length " + std::to_string(data.size()) + " does not match shape");
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = require_number(data[static_cast<std::size_t>(r * cols + c)], what + " entry");
        }
    }
    return m;
}

Json sheaf_to_json(const CellSheaf& sheaf)
{
    const CliqueComplex& cx = sheaf.complex();
    Json triangles = Json::array();
    for (const Triangle& t : cx.triangles()) {
        triangles.push_back({t[0], t[1], t[2]});
    }
    Json complex = graph_to_json(skeleton(cx));
    complex["triangles"] = triangles;
    complex["apex"] = cx.apex() ? Json(*cx.apex()) : Json(nullptr);
    Json stalks = Json::object();
    const char* names[3] = {"vertices", "edges", "triangles"};
    for (int d = 0; d < 3; ++d) {
        Json list = Json::array();
        for (const Stalk& s : sheaf.stalks(d)) {
            list.push_back(matrix_to_json(s.basis));
        }
        stalks[names[d]] = list;
    }
    Json restrictions = Json::object();
    const char* rnames[2] = {"edge_vertex", "triangle_edge"};
    for (int d = 1; d <= 2; ++d) {
        Json list = Json::array();
        const auto incs = cx.incidences(d);
        for (std::size_t k = 0; k < incs.size(); ++k) {
            list.push_back({{"coface", incs[k].coface},
                            {"face", incs[k].face},
                            {"sign", incs[k].sign},
                            {"map", matrix_to_json(sheaf.restriction(d, static_cast<Index>(k)))}});
        }
        restrictions[rnames[d - 1]] = list;
    }
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "cell_sheaf"},
                {"complex", complex},
                {"validated", sheaf.validated()},
                {"stalks", stalks},
                {"restrictions", restrictions}};
}

CellSheaf sheaf_from_json(const Json& j)
{
    require_schema(j, "sheaf");
    const Json& cj = require_field(j, "complex", "sheaf");
    Graph g = graph_from_json(cj);
    CliqueComplex cx;
    const Json& apex = require_field(cj, "apex", "sheaf complex");
    if (apex.is_null()) {
        cx = build_clique_complex(g);
    } else {
        const Index a = require_integer(apex, "sheaf complex apex");
        if (a != g.vertex_count - 1) {
            throw InputError("sheaf: apex must be the last vertex");
        }
        Graph base{g.vertex_count - 1, {}};
        for (const Edge& e : g.edges) {
            if (e[0] != a && e[1] != a) {
                base.edges.push_back(e);
            }
        }
        cx = cone_complex(build_clique_complex(base));
    }
    const Json& tris = require_field(cj, "triangles", "sheaf complex");
    if (!tris.is_array() || static_cast<Index>(tris.size()) != cx.cell_count(2)) {
        throw InputError("sheaf: triangle list does not match the clique complex of the edges");
    }
    for (std::size_t i = 0; i < tris.size(); ++i) {
        const Triangle& t = cx.triangles()[i];
        if (!tris[i].is_array() || tris[i].size() != 3 || require_integer(tris[i][0], "triangle") != t[0] ||
            require_integer(tris[i][1], "triangle") != t[1] || require_integer(tris[i][2], "triangle") != t[2]) {
            throw InputError("sheaf: triangle #" + std::to_string(i) + " does not match the clique complex");
        }
    }
    std::array<std::vector<Stalk>, 3> stalks;
    const Json& sj = require_field(j, "stalks", "sheaf");
    const char* names[3] = {"vertices", "edges", "triangles"};
    for (int d = 0; d < 3; ++d) {
        const Json& list = require_field(sj, names[d], "sheaf stalks");
        if (!list.is_array()) {
            throw InputError(std::string("sheaf: stalks.") + names[d] + " must be an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            stalks[static_cast<std::size_t>(d)].push_back(
                Stalk{matrix_from_json(list[i], std::string("stalk ") + names[d] + "#" + std::to_string(i))});
        }
    }
    std::array<std::vector<Matrix>, 2> maps;
    const Json& rj = require_field(j, "restrictions", "sheaf");
    const char* rnames[2] = {"edge_vertex", "triangle_edge"};
    for (int d = 1; d <= 2; ++d) {
        const Json& list = require_field(rj, rnames[d - 1], "sheaf restrictions");
        const auto incs = cx.incidences(d);
        if (!list.is_array() || list.size() != incs.size()) {
            throw InputError(std::string("sheaf: restrictions.") + rnames[d - 1] + " has the wrong length");
        }
        for (std::size_t k = 0; k < incs.size(); ++k) {
            const std::string where = std::string("restriction ") + rnames[d - 1] + "#" + std::to_string(k);
            if (require_integer(require_field(list[k], "coface", where), where) != incs[k].coface ||
                require_integer(require_field(list[k], "face", where), where) != incs[k].face) {
                throw InputError(where + " is out of canonical incidence order");
            }
            maps[static_cast<std::size_t>(d - 1)].push_back(matrix_from_json(require_field(list[k], "map", where), where));
        }
    }
    CellSheaf sheaf(std::move(cx), std::move(stalks), std::move(maps));
    const Json& validated = require_field(j, "validated", "sheaf");
    if (!validated.is_boolean()) {
        throw InputError("sheaf: 'validated' must be a boolean");
    }
    sheaf.set_validated(validated.get<bool>());
    return sheaf;
}

Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json operator_to_json(const Matrix& m, int degree, const std::string& provenance, const std::string& label)
{
    Json j = matrix_to_json(m);
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "operator"},
                {"degree", degree},
                {"provenance", provenance},
                {"label", label},
                {"shape", j["shape"]},
                {"data", j["data"]}};
}

Json operator_to_json(const SheafLaplacian& op)
{
    return operator_to_json(op.matrix, op.degree, to_string(op.provenance), op.label);
}

namespace {

Json doubles(const std::vector<double>& v)
{
    Json a = Json::array();
    for (double x : v) {
        a.push_back(number_or_null(x));
    }
    return a;
}

Json witness_config_json(const WitnessConfig& c)
{
    return Json{{"delta0", c.delta0}, {"delta1", c.delta1}, {"weight", to_string(c.weight)}, {"heat_time", c.heat_time}};
}

Json channel_json(const ChannelSummary& c)
{
    return Json{{"name", c.name},
                {"operator", c.operator_label},
                {"auxiliary", c.auxiliary},
                {"dimension", c.dimension},
                {"kernel_dim", c.kernel_dim},
                {"lambda_min", c.lambda_min},
                {"spectral_gap", number_or_null(c.spectral_gap)},
                {"normalized_gap", number_or_null(c.normalized_gap)},
                {"global_witness", c.global_witness},
                {"witness", witness_config_json(c.witness)},
                {"normalized", c.normalized},
                {"zero_operator", c.zero_operator},
                {"spectrum", doubles(c.spectrum)}};
}

Json envelope(const std::string& kind)
{
    return Json{{"schema_version", kSchemaVersion}, {"kind", kind}};
}

} // namespace

Json to_json(const LocalWitnessMap& map)
{
    Json modes = Json::array();
    for (Index i : map.admitted_modes) {
        modes.push_back(i);
    }
    return Json{{"degree", map.degree},
                {"delta", map.delta},
                {"scores", doubles(map.scores)},
                {"coface_energy", doubles(map.coface_energy)},
                {"face_energy", doubles(map.face_energy)},
                {"admitted_modes", modes},
                {"weighted_energy", map.weighted_energy}};
}

Json to_json(const DiagnosticsReport& report)
{
    Json j = envelope("diagnostics");
    Json channels = Json::array();
    for (const ChannelSummary* c : report.channels()) {
        channels.push_back(channel_json(*c));
    }
    j["channels"] = channels;
    j["defect_norm"] = report.defect_norm ? Json(*report.defect_norm) : Json(nullptr);
    j["localization"] = Json{{"vertex", to_json(report.vertex_map)},
                             {"edge", to_json(report.edge_map)},
                             {"relative", to_json(report.relative_map)}};
    return j;
}

Json to_json(const SeparationReport& r)
{
    Json j = envelope("separation");
    j["relative_kernel"] = r.relative_kernel;
    j["harmonic_dim"] = r.harmonic_dim;
    j["restricted_kernel"] = r.restricted_kernel;
    j["intersection_dim"] = r.intersection_dim;
    j["a"] = r.a;
    j["b"] = r.b;
    j["c"] = r.c;
    j["consistent"] = r.consistent;
    j["gamma"] = r.gamma ? number_or_null(*r.gamma) : Json(nullptr);
    return j;
}

Json to_json(const ExistenceResult& r)
{
    Json j = envelope("experiment");
    j["experiment"] = "existence";
    j["parameters"] = Json{{"n", r.n}, {"stalk_dim", r.stalk_dim}};
    Json rows = Json::array();
    for (const ExistenceRow* row : {&r.trivial, &r.mobius}) {
        rows.push_back(Json{{"sheaf", row->label},
                            {"lambda_min", row->lambda_min},
                            {"kernel_dim", row->kernel_dim},
                            {"spectral_gap", number_or_null(row->spectral_gap)}});
    }
    j["rows"] = rows;
    j["verdict"] = r.verdict;
    return j;
}

Json to_json(const MagnitudeResult& r)
{
    Json j = envelope("experiment");
    j["experiment"] = "magnitude";
    j["parameters"] = Json{{"n", r.n}, {"tau", r.tau}, {"link_strength", r.link_strength}, {"sigma", r.sigma},
                           {"seed", r.seed}, {"stalk_dim", 2}};
    Json rows = Json::array();
    for (const MagnitudeRow* row : {&r.twist, &r.noisy}) {
        rows.push_back(Json{{"sheaf", row->label},
                            {"spectral_gap", number_or_null(row->spectral_gap)},
                            {"normalized_gap", number_or_null(row->normalized_gap)},
                            {"witness", row->witness},
                            {"kernel_dim", row->kernel_dim},
                            {"excluded", row->excluded}});
    }
    j["rows"] = rows;
    j["verdict"] = r.verdict;
    return j;
}

namespace {

Json maps_json(const LocalizationMaps& m)
{
    return Json{{"vertex", to_json(m.vertex_map)},
                {"edge_energy", doubles(m.edge_energy)},
                {"edge", to_json(m.edge_map)},
                {"relative", to_json(m.relative_map)},
                {"participation_ratio", m.participation_ratio},
                {"argmax_edge", m.argmax_edge}};
}

} // namespace

Json to_json(const LocalizationResult& r)
{
    Json j = envelope("experiment");
    j["experiment"] = "localization";
    j["parameters"] = Json{{"n", r.n}, {"tau", r.tau}, {"link_strength", r.link_strength}, {"sigma", r.sigma},
                           {"seed", r.seed}, {"delta", r.delta}, {"stalk_dim", 2}};
    j["defect_edge"] = r.defect_edge;
    j["hidden_twist"] = maps_json(r.twist);
    j["noisy_trivial"] = maps_json(r.noisy);
    j["verdict"] = r.verdict;
    return j;
}

Json to_json(const RelativityResult& r)
{
    Json j = envelope("experiment");
    j["experiment"] = "relativity";
    j["parameters"] = Json{{"n", r.n}, {"stalk_dim", r.stalk_dim}};
    Json rows = Json::array();
    for (const RelativityRow* row : {&r.full_rank, &r.deficient}) {
        rows.push_back(Json{{"grounding", row->label}, {"lambda_min", row->lambda_min}, {"kernel_dim", row->kernel_dim}});
    }
    j["rows"] = rows;
    j["base_channel_difference"] = r.base_channel_difference;
    j["verdict"] = r.verdict;
    return j;
}

Json to_json(const EnsembleResult& r)
{
    Json j = envelope("ensemble");
    Json seeds = Json::array();
    for (std::size_t i = 0; i < r.magnitude.size(); ++i) {
        const auto& m = r.magnitude[i];
        const auto& l = r.localization[i];
        seeds.push_back(Json{{"seed", m.seed},
                             {"twist_normalized_gap", number_or_null(m.twist.normalized_gap)},
                             {"noisy_normalized_gap", number_or_null(m.noisy.normalized_gap)},
                             {"gap_order", m.verdict},
                             {"twist_argmax_edge", l.twist.argmax_edge},
                             {"twist_participation_ratio", l.twist.participation_ratio},
                             {"noisy_participation_ratio", l.noisy.participation_ratio}});
    }
    j["seeds"] = seeds;
    j["gap_order_fraction"] = r.gap_order_fraction;
    j["argmax_fraction"] = r.argmax_fraction;
    j["participation_fraction"] = r.participation_fraction;
    return j;
}

Json to_json(const ConeEquivalenceReport& r)
{
    return Json{{"hypotheses_met", r.hypotheses_met},
                {"defect_norm", r.defect_norm},
                {"residuals", doubles(r.residuals)},
                {"max_residual", r.max_residual},
                {"passed", r.passed}};
}

Json to_json(const ExactnessReport& r)
{
    Json nodes = Json::array();
    for (const LesNode& n : r.nodes) {
        nodes.push_back(Json{{"space", n.label},
                             {"dim", n.dim},
                             {"rank_in", n.rank_in},
                             {"rank_out", n.rank_out},
                             {"composite_norm", n.composite_norm},
                             {"exact", n.exact}});
    }
    auto betti = [](const std::map<int, Index>& m) {
        Json o = Json::object();
        for (const auto& [k, v] : m) {
            o[std::to_string(k)] = v;
        }
        return o;
    };
    return Json{{"hypotheses_met", r.hypotheses_met},
                {"defect_norm", r.defect_norm},
                {"nodes", nodes},
                {"betti_base", betti(r.betti_base)},
                {"betti_target", betti(r.betti_target)},
                {"betti_cone", betti(r.betti_cone)},
                {"max_composite_norm", r.max_composite_norm},
                {"exact", r.exact}};
}

Json to_json(const ConeReductionReport& r)
{
    return Json{{"coupling_residual", r.coupling_residual},
                {"commutator_residual", r.commutator_residual},
                {"hypotheses_met", r.hypotheses_met},
                {"eta", r.eta},
                {"v", r.v},
                {"theta", r.theta},
                {"cone_eta", r.cone_eta},
                {"bound_v_holds", r.bound_v_holds},
                {"bound_theta_holds", r.bound_theta_holds}};
}

Json to_json(const BlockDecompositionReport& r)
{
    return Json{{"coupling_norm", r.coupling_norm},
                {"decoupled", r.decoupled},
                {"max_spectral_difference", r.max_spectral_difference},
                {"spectra_match", r.spectra_match}};
}

Json to_json(const SheafValidationReport& r)
{
    Json list = Json::array();
    for (const auto& v : r.violations) {
        list.push_back(Json{{"triangle", v.triangle},
                            {"vertex", v.vertex},
                            {"edges", {v.edge_a, v.edge_b}},
                            {"defect", v.defect}});
    }
    Json j = envelope("validation");
    j["ok"] = r.ok;
    j["max_defect"] = r.max_defect;
    j["violations"] = list;
    return j;
}

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string witness_csv(const LocalWitnessMap& map)
{
    std::string out = "cell_id,degree,delta,score\n";
    for (std::size_t i = 0; i < map.scores.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(map.degree) + "," + format_double(map.delta) + "," +
               format_double(map.scores[i]) + "\n";
    }
    return out;
}

std::string profile_csv(const Spectrum& s, const std::vector<double>& grid)
{
    const auto dims = indicator_profile(s, grid);
    std::string out = "delta,dim\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_double(grid[i]) + "," + std::to_string(dims[i]) + "\n";
    }
    return out;
}

std::string spectra_csv(const DiagnosticsReport& report)
{
    std::string out = "channel,index,eigenvalue\n";
    for (const ChannelSummary* c : report.channels()) {
        for (std::size_t i = 0; i < c->spectrum.size(); ++i) {
            out += c->name + "," + std::to_string(i) + "," + format_double(c->spectrum[i]) + "\n";
        }
    }
    return out;
}

std::string dump_json(const Json& j)
{
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw InputError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw InputError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

} // namespace sheafgauge
