#include <catch_amalgamated.hpp>

#include <sheafgauge/complex.hpp>
#include <sheafgauge/random.hpp>

#include "support/generators.hpp"

using namespace sheafgauge;

namespace {

Graph triangle_graph()
{
    return Graph{3, {{0, 1}, {0, 2}, {1, 2}}};
}

} // namespace

TEST_CASE("clique complex cell counts", "[complex]")
{
    const CliqueComplex k3 = build_clique_complex(triangle_graph());
    CHECK(k3.cell_count(0) == 3);
    CHECK(k3.cell_count(1) == 3);
    CHECK(k3.cell_count(2) == 1);

    const CliqueComplex c10 = build_clique_complex(cycle_graph(10));
    CHECK(c10.cell_count(0) == 10);
    CHECK(c10.cell_count(1) == 10);
    CHECK(c10.cell_count(2) == 0);

    const CliqueComplex k4 = build_clique_complex(complete_graph(4));
    CHECK(k4.cell_count(1) == 6);
    CHECK(k4.cell_count(2) == 4);
    CHECK(euler_characteristic(k4) == 4 - 6 + 4);
}

TEST_CASE("incidence signs follow the omitted vertex", "[complex]")
{
    const CliqueComplex k3 = build_clique_complex(triangle_graph());
    const Index e01 = *k3.find_edge(0, 1);
    const Index e02 = *k3.find_edge(0, 2);
    const Index e12 = *k3.find_edge(1, 2);
    CHECK(k3.incidence_sign({2, 0}, {1, e12}) == 1);
    CHECK(k3.incidence_sign({2, 0}, {1, e02}) == -1);
    CHECK(k3.incidence_sign({2, 0}, {1, e01}) == 1);
    CHECK(k3.incidence_sign({1, e01}, {0, 0}) == -1);
    CHECK(k3.incidence_sign({1, e01}, {0, 1}) == 1);
    CHECK_THROWS_AS(k3.incidence_sign({1, e01}, {0, 2}), IncidenceError);
}

TEST_CASE("cone complex bookkeeping", "[complex]")
{
    const CliqueComplex c10 = cone_complex(build_clique_complex(cycle_graph(10)));
    CHECK(c10.cell_count(0) == 11);
    CHECK(c10.cell_count(1) == 20);
    CHECK(c10.cell_count(2) == 10);
    CHECK(c10.apex() == Index{10});

    const CliqueComplex edge = cone_complex(build_clique_complex(path_graph(2)));
    CHECK(edge.cell_count(0) == 3);
    CHECK(edge.cell_count(1) == 3);
    CHECK(edge.cell_count(2) == 1);

    const CliqueComplex empty = cone_complex(build_clique_complex(Graph{2, {}}));
    CHECK(empty.cell_count(0) == 3);
    CHECK(empty.cell_count(1) == 2);
    CHECK(empty.cell_count(2) == 0);

    CHECK_THROWS_AS(cone_complex(c10), ValidationError);
}

TEST_CASE("cone cells are oriented apex first", "[complex]")
{
    const CliqueComplex cone = cone_complex(build_clique_complex(path_graph(2)));
    const Index apex = *cone.apex();
    const Index cone_edge = *cone.find_edge(0, apex);
    CHECK(cone.is_cone_cell({1, cone_edge}));
    CHECK(cone.oriented_vertices({1, cone_edge}) == std::vector<Index>{apex, 0});
    /** Edge (*, 0): omitting the apex leaves vertex 0 at position 0. */
    CHECK(cone.incidence_sign({1, cone_edge}, {0, 0}) == 1);
    CHECK(cone.incidence_sign({1, cone_edge}, {0, apex}) == -1);
    CHECK(cone.oriented_vertices({2, 0}) == std::vector<Index>{apex, 0, 1});
    CHECK(cone.incidence_sign({2, 0}, {1, *cone.find_edge(0, 1)}) == 1);
    CHECK(cone.incidence_sign({2, 0}, {1, *cone.find_edge(1, apex)}) == -1);
    CHECK(cone.incidence_sign({2, 0}, {1, *cone.find_edge(0, apex)}) == 1);
}

TEST_CASE("graph validation names the offending edge", "[complex]")
{
    CHECK_THROWS_WITH(validate_graph(Graph{3, {{0, 1}, {1, 1}}}), Catch::Matchers::ContainsSubstring("edge #1"));
    CHECK_THROWS_WITH(validate_graph(Graph{3, {{0, 1}, {1, 0}}}), Catch::Matchers::ContainsSubstring("edge #1"));
    CHECK_THROWS_AS(validate_graph(Graph{3, {{0, 3}}}), InputError);
    CHECK_THROWS_AS(validate_graph(Graph{3, {{-1, 2}}}), InputError);
}

TEST_CASE("property: boundary of boundary vanishes on random clique complexes", "[complex][property]")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const Graph g = gen::random_graph(rng, 4 + static_cast<Index>(rng.below(6)), 0.5);
        for (const CliqueComplex& cx : {build_clique_complex(g), cone_complex(build_clique_complex(g))}) {
            for (Index t = 0; t < cx.cell_count(2); ++t) {
                std::map<Index, int> composite;
                for (const Incidence& te : cx.faces_of(2, t)) {
                    for (const Incidence& ev : cx.faces_of(1, te.face)) {
                        composite[ev.face] += te.sign * ev.sign;
                    }
                }
                for (const auto& [v, total] : composite) {
                    INFO("seed " << seed << " triangle " << t << " vertex " << v);
                    CHECK(total == 0);
                }
            }
        }
    }
}

TEST_CASE("property: construction is independent of edge order", "[complex][property]")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        Graph g = gen::random_graph(rng, 7, 0.5);
        Graph shuffled = g;
        for (std::size_t i = shuffled.edges.size(); i > 1; --i) {
            std::swap(shuffled.edges[i - 1], shuffled.edges[rng.below(i)]);
            if (rng.uniform() < 0.5) {
                std::swap(shuffled.edges[i - 1][0], shuffled.edges[i - 1][1]);
            }
        }
        const CliqueComplex a = build_clique_complex(g);
        const CliqueComplex b = build_clique_complex(shuffled);
        CHECK(a.edges() == b.edges());
        CHECK(a.triangles() == b.triangles());
        const CliqueComplex cone = cone_complex(a);
        CHECK(cone.cell_count(1) == a.cell_count(1) + a.cell_count(0));
        CHECK(cone.cell_count(2) == a.cell_count(2) + a.cell_count(1));
    }
}
