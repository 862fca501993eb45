#include <catch_amalgamated.hpp>

#include <sheafgauge/io.hpp>

#include "support/generators.hpp"

#include <filesystem>

using namespace sheafgauge;
using Catch::Matchers::ContainsSubstring;

namespace {

bool same_sheaf(const CellSheaf& a, const CellSheaf& b)
{
    if (a.complex().edges() != b.complex().edges() || a.complex().triangles() != b.complex().triangles() ||
        a.complex().apex() != b.complex().apex()) {
        return false;
    }
    for (int d = 0; d < 3; ++d) {
        for (Index c = 0; c < a.complex().cell_count(d); ++c) {
            if (a.stalk(d, c).basis != b.stalk(d, c).basis) {
                return false;
            }
        }
    }
    return coboundary(a, 0) == coboundary(b, 0) && coboundary(a, 1) == coboundary(b, 1);
}

} // namespace

TEST_CASE("parse errors carry the byte offset", "[io]")
{
    CHECK_THROWS_WITH(parse_json("{\"a\": [1, 2,,]}", "graph.json"), ContainsSubstring("byte offset 13"));
    CHECK_THROWS_AS(parse_json("", "x"), InputError);
    CHECK(parse_json("{\"a\": 1}", "x")["a"] == 1);
}

TEST_CASE("schema versions", "[io]")
{
    CHECK_THROWS_AS(require_schema(Json::object(), "report"), SchemaError);
    CHECK_THROWS_WITH(require_schema(Json{{"schema_version", 99}}, "report"), ContainsSubstring("99"));
    CHECK_NOTHROW(require_schema(Json{{"schema_version", kSchemaVersion}}, "report"));
    CHECK_THROWS_AS(sheaf_from_json(Json{{"schema_version", 2}}), SchemaError);
}

TEST_CASE("graph JSON", "[io]")
{
    const Graph g = graph_from_json(parse_json(R"({"vertices": 3, "edges": [[0, 1], [1, 2]]})", "g"));
    CHECK(g.vertex_count == 3);
    CHECK(g.edges.size() == 2);
    CHECK(graph_from_json(graph_to_json(g)).edges == g.edges);
    CHECK_THROWS_AS(graph_from_json(parse_json(R"({"vertices": 3, "edges": [[0, 1.5]]})", "g")), InputError);
    CHECK_THROWS_AS(graph_from_json(parse_json(R"({"vertices": 3, "edges": [[0, 1, 2]]})", "g")), InputError);
    CHECK_THROWS_WITH(graph_from_json(parse_json(R"({"vertices": 3, "edges": [[0, 1], [1, 1]]})", "g")),
                      ContainsSubstring("edge #1"));
    CHECK_THROWS_AS(graph_from_json(parse_json(R"({"edges": []})", "g")), InputError);
}

TEST_CASE("features JSON", "[io]")
{
    const FeatureMap f = features_from_json(parse_json(R"({"features": {"0": [[1, 0], [0, 1]], "1": [[2, 3]]}})", "f"));
    REQUIRE(f.size() == 2);
    CHECK(f.at(0).rows() == 2);
    CHECK(f.at(1).cols() == 2);
    CHECK(f.at(1)(0, 1) == 3.0);
    CHECK(features_from_json(features_to_json(f)) == f);
    CHECK_THROWS_WITH(features_from_json(parse_json(R"({"features": {"a": [[1]]}})", "f")),
                      ContainsSubstring("'a'"));
    CHECK_THROWS_AS(features_from_json(parse_json(R"({"features": {"0": [[1, 2], [3]]}})", "f")), InputError);
    CHECK_THROWS_AS(features_from_json(parse_json(R"({"features": {"0": []}})", "f")), InputError);
}

TEST_CASE("matrix JSON round trip", "[io]")
{
    Rng rng(3);
    const Matrix m = rng.gaussian(3, 4);
    const Json j = matrix_to_json(m);
    CHECK(j["shape"] == Json::array({3, 4}));
    CHECK(j["data"][1] == m(0, 1));
    CHECK(matrix_from_json(j, "m") == m);
    CHECK(matrix_from_json(matrix_to_json(Matrix(0, 2)), "m").cols() == 2);
    CHECK_THROWS_AS(matrix_from_json(Json{{"shape", {2, 2}}, {"data", {1, 2, 3}}}, "m"), InputError);
}

TEST_CASE("sheaf JSON round trip", "[io][property]")
{
    std::vector<CellSheaf> sheaves{trivial_bundle(5, 2), mobius_bundle(10), hidden_twist_bundle({}),
                                   noisy_trivial_bundle(6, 2, 0.3, 9)};
    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
        sheaves.push_back(build_sheaf_from_features(gen::random_graph(rng, 7, 0.5), gen::random_features(rng, 7)));
    }
    const CellSheaf c = trivial_bundle(6, 1);
    sheaves.push_back(geometric_cone_sheaf(c, random_compatible_grounding(c, 2, 1)));
    for (std::size_t i = 0; i < sheaves.size(); ++i) {
        const Json j = sheaf_to_json(sheaves[i]);
        const Json text = parse_json(dump_json(j), "sheaf");
        const CellSheaf back = sheaf_from_json(text);
        INFO("sheaf " << i);
        CHECK(same_sheaf(sheaves[i], back));
        CHECK(dump_json(sheaf_to_json(back)) == dump_json(j));
    }
}

TEST_CASE("sheaf JSON rejects tampered payloads", "[io]")
{
    Json j = sheaf_to_json(constant_sheaf(build_clique_complex(complete_graph(3)), 1));
    Json missing = j;
    missing["complex"]["triangles"] = Json::array();
    CHECK_THROWS_AS(sheaf_from_json(missing), InputError);
    Json wrong = j;
    wrong["restrictions"]["edge_vertex"].erase(0);
    CHECK_THROWS_AS(sheaf_from_json(wrong), InputError);
}

TEST_CASE("numbers and CSV", "[io]")
{
    CHECK(number_or_null(kInfinity).is_null());
    CHECK(number_or_null(std::nan("")).is_null());
    CHECK(number_or_null(0.5) == 0.5);
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

    LocalWitnessMap m;
    m.degree = 1;
    m.delta = 0.25;
    m.scores = {0.5, 2.0};
    CHECK(witness_csv(m) == "cell_id,degree,delta,score\n0,1,0.25,0.5\n1,1,0.25,2\n");

    Vector d(3);
    d << 0.0, 1.0, 2.0;
    const Spectrum s = eigendecompose(Matrix(d.asDiagonal()));
    CHECK(profile_csv(s, {0.0, 1.5}) == "delta,dim\n0,1\n1.5,2\n");

    const CellSheaf t = trivial_bundle(4, 1);
    const std::string spectra = spectra_csv(run_diagnostics(t, full_rank_grounding(t)));
    CHECK(spectra.rfind("channel,index,eigenvalue\n", 0) == 0);
    CHECK(std::count(spectra.begin(), spectra.end(), '\n') == 1 + 4 * 4);
}

TEST_CASE("report JSON", "[io]")
{
    const ExistenceResult e = experiment_existence();
    const Json j = to_json(e);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["kind"] == "experiment");
    CHECK(j["experiment"] == "existence");
    CHECK(j["verdict"] == true);
    CHECK(j.contains("rows"));

    const CellSheaf t = trivial_bundle(4, 1);
    const Json d = to_json(run_diagnostics(t, deficient_grounding(t)));
    CHECK(d["schema_version"] == kSchemaVersion);
    CHECK(dump_json(d).back() == '\n');
}

TEST_CASE("atomic file writes", "[io]")
{
    const auto dir = std::filesystem::temp_directory_path() / "sheafgauge_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    CHECK(read_text_file(path) == "second");
    CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), InputError);
    std::filesystem::remove_all(dir);
}
