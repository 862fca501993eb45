#include <catch_amalgamated.hpp>

#include <sheafgauge/operators.hpp>
#include <sheafgauge/spectral.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sheafgauge;
using Catch::Matchers::WithinAbs;

TEST_CASE("coboundary conventions", "[operators]")
{
    const CellSheaf edge = constant_sheaf(build_clique_complex(path_graph(2)), 1);
    Matrix expected(1, 2);
    expected << -1, 1;
    CHECK(coboundary(edge, 0) == expected);

    const CellSheaf cycle = trivial_bundle(10, 1);
    CHECK(coboundary(cycle, 0) == oracle::cycle_bundle_d0(10, 1, {}));

    const CellSheaf k3 = constant_sheaf(build_clique_complex(complete_graph(3)), 1);
    CHECK((coboundary(k3, 1) * coboundary(k3, 0)).norm() == 0.0);
    CHECK_THROWS_AS(coboundary(k3, 2), ConfigError);
}

TEST_CASE("laplacian spectra against closed forms", "[operators]")
{
    const CellSheaf edge = constant_sheaf(build_clique_complex(path_graph(2)), 1);
    Matrix l(2, 2);
    l << 1, -1, -1, 1;
    CHECK(laplacian(edge, 0).matrix == l);

    const Graph k3 = complete_graph(3);
    const Matrix l0 = laplacian(constant_sheaf(build_clique_complex(k3), 1), 0).matrix;
    CHECK((l0 - oracle::graph_laplacian(k3)).norm() == 0.0);
    const auto eig = oracle::eigenvalues(l0);
    CHECK_THAT(eig[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(eig[1], WithinAbs(3.0, 1e-12));
    CHECK_THAT(eig[2], WithinAbs(3.0, 1e-12));

    const Spectrum m = eigendecompose(laplacian(mobius_bundle(10), 0));
    CHECK_THAT(lambda_min(m), WithinAbs(2.0 * (1.0 - std::cos(std::numbers::pi / 10.0)), 1e-12));
}

TEST_CASE("property: d squared vanishes and laplacians are PSD", "[operators][property]")
{
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Rng rng(200 + seed);
        const Graph g = gen::random_graph(rng, 8, 0.5);
        const CellSheaf s = build_sheaf_from_features(g, gen::random_features(rng, 8));
        const Matrix d0 = coboundary(s, 0);
        const Matrix d1 = coboundary(s, 1);
        INFO("seed " << seed);
        CHECK((d1 * d0).norm() < 1e-8 * std::max(1.0, d1.norm() * d0.norm()));
        for (int j = 0; j < 2; ++j) {
            const Matrix l = laplacian(s, j).matrix;
            CHECK((l - l.transpose()).norm() < 1e-12);
            const auto eig = oracle::eigenvalues(l);
            if (!eig.empty()) {
                CHECK(eig.front() > -1e-8 * std::max(1.0, eig.back()));
            }
        }
        CHECK((laplacian(s, 1).matrix - (d0 * d0.transpose() + d1.transpose() * d1)).norm() < 1e-12);
    }
}

TEST_CASE("consistency energy and feasibility", "[operators]")
{
    const CellSheaf cycle = trivial_bundle(10, 1);
    const SheafLaplacian l0 = laplacian(cycle, 0);
    CHECK_THAT(consistency_energy(l0, Vector::Ones(10)), WithinAbs(0.0, 1e-14));

    const Spectrum s = eigendecompose(l0);
    const Vector top = s.eigenvectors.col(9);
    CHECK_THAT(consistency_energy(l0, top), WithinAbs(s.eigenvalues(9), 1e-12));

    Rng rng(1);
    const Matrix d0 = coboundary(cycle, 0);
    for (int i = 0; i < 10; ++i) {
        const Vector x = rng.gaussian(10, 1).col(0);
        CHECK_THAT(consistency_energy(l0, x), WithinAbs((d0 * x).squaredNorm(), 1e-10));
    }

    const CellSheaf edge = constant_sheaf(build_clique_complex(path_graph(2)), 1);
    const SheafLaplacian le = laplacian(edge, 0);
    Vector ker(2);
    ker << 1, 1;
    Vector up(2);
    up << 1, -1;
    up /= std::sqrt(2.0);
    CHECK(is_delta_feasible(le, ker, 0.0));
    CHECK_FALSE(is_delta_feasible(le, up, 1.0));
    CHECK(is_delta_feasible(le, up, 2.0));
    CHECK_THROWS_AS(is_delta_feasible(le, up, -1.0), ConfigError);
    CHECK_THROWS_AS(consistency_energy(le, Vector::Ones(3)), DimensionError);
}

TEST_CASE("padding grounding", "[operators][grounding]")
{
    const CellSheaf c = trivial_bundle(6, 2);
    const GroundingMorphism g = grounding_from_padding(c, GroundingMode::VertexLevel);
    CHECK(g.target_dim == 2);
    for (const Matrix& m : g.cell_maps[0]) {
        CHECK((m.transpose() * m - Matrix::Identity(2, 2)).norm() < 1e-14);
    }

    FeatureMap f;
    f[0] = Matrix::Identity(3, 3).leftCols(1);
    f[1] = Matrix::Identity(3, 3);
    const CellSheaf s = build_sheaf_from_features(path_graph(2), f);
    const GroundingMorphism p = grounding_from_padding(s, GroundingMode::VertexLevel);
    CHECK(p.cell_maps[0][0].rows() == 3);
    CHECK(p.cell_maps[0][0].cols() == 1);
    CHECK_THAT(p.cell_maps[0][0].norm(), WithinAbs(1.0, 1e-14));

    Rng rng(8);
    const CellSheaf r = build_sheaf_from_features(gen::random_graph(rng, 8, 0.4), gen::random_features(rng, 8));
    const GroundingMorphism cochain = grounding_from_padding(r, GroundingMode::CochainLevel);
    Matrix all(r.max_ambient_dim(), 0);
    for (const Stalk& st : r.stalks(1)) {
        Matrix next(all.rows(), all.cols() + st.dim());
        next << all, st.basis;
        all = next;
    }
    CHECK(oracle::rank(cochain.cochain_map) == oracle::rank(all));
}

TEST_CASE("incidence defect", "[operators][grounding]")
{
    const CellSheaf c = constant_sheaf(build_clique_complex(complete_graph(4)), 2);
    Rng rng(4);
    const Matrix m = rng.gaussian(3, 2);
    std::array<std::vector<Matrix>, 3> maps;
    for (int d = 0; d < 3; ++d) {
        maps[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(c.complex().cell_count(d)), m);
    }
    CHECK(incidence_defect(c, vertex_grounding(c, maps)).total_norm < 1e-14);

    const CellSheaf e = constant_sheaf(build_clique_complex(path_graph(2)), 1);
    std::array<std::vector<Matrix>, 3> scalar;
    scalar[0] = {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0)};
    scalar[1] = {Matrix::Constant(1, 1, 1.0)};
    CHECK(incidence_defect(e, vertex_grounding(e, scalar, TargetKind::DegreeZeroConcentrated)).total_norm > 0.0);
    CHECK(incidence_defect(e, vertex_grounding(e, scalar, TargetKind::Constant)).total_norm > 0.0);
}

TEST_CASE("property: incidence defect matches the assembled commutator", "[operators][grounding][property]")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(300 + seed);
        const CellSheaf s = build_sheaf_from_features(gen::random_graph(rng, 6, 0.6), gen::random_features(rng, 6));
        const Index w = 3;
        std::array<std::vector<Matrix>, 3> maps;
        for (int d = 0; d < 3; ++d) {
            for (Index c = 0; c < s.complex().cell_count(d); ++c) {
                maps[static_cast<std::size_t>(d)].push_back(rng.gaussian(w, s.stalk_dim(d, c)));
            }
        }
        const GroundingMorphism g = vertex_grounding(s, maps);
        const IncidenceDefect defect = incidence_defect(s, g);
        const ChainMap eps = grounding_chain_map(s, g);
        const CochainComplex target = target_cochain_complex(s.complex(), w, TargetKind::Constant);
        /** Block (coface, face) of eps^{n+1} d^n - d_W^n eps^n is the sum over incidences of that pair. */
        for (int n = 0; n < 2; ++n) {
            const Matrix brute = eps.at(n + 1) * coboundary(s, n) - target.differential(n) * eps.at(n);
            Matrix assembled = Matrix::Zero(brute.rows(), brute.cols());
            const auto incs = s.complex().incidences(n + 1);
            for (std::size_t k = 0; k < incs.size(); ++k) {
                assembled.block(incs[k].coface * w, s.cochain_offset(n, incs[k].face), w,
                                s.stalk_dim(n, incs[k].face)) += defect.blocks[static_cast<std::size_t>(n)][k];
            }
            INFO("seed " << seed << " degree " << n);
            CHECK((brute - assembled).norm() < 1e-10);
        }
    }
}

TEST_CASE("channel set", "[operators][channels]")
{
    const CellSheaf c = trivial_bundle(10, 1);
    const ChannelSet zero = channel_set(c, zero_grounding(c, 4));
    CHECK((zero.relative.matrix - zero.intrinsic.matrix).norm() < 1e-14);
    CHECK(zero.utilization.matrix.norm() == 0.0);

    const ChannelSet full = channel_set(c, full_rank_grounding(c));
    const auto util = oracle::eigenvalues(full.utilization.matrix);
    for (double x : util) {
        CHECK_THAT(x, WithinAbs(1.0, 1e-10));
    }
    const Matrix eps = full.grounding;
    CHECK((full.relative.matrix - full.intrinsic.matrix - eps.transpose() * eps).norm() < 1e-12);

    const ChannelSet deficient = channel_set(c, deficient_grounding(c));
    CHECK(kernel_dim(eigendecompose(deficient.relative)) == 1);
    CHECK(deficient.utilization.provenance == Provenance::Utilization);

    CHECK_THROWS_AS(channel_set(c, grounding_from_padding(c, GroundingMode::VertexLevel)), ModeError);
}

TEST_CASE("deficient grounding kills exactly the harmonic cochains", "[operators][grounding]")
{
    const CellSheaf c = trivial_bundle(10, 1);
    const Matrix eps = deficient_grounding(c).cochain_map;
    CHECK(eps.rows() == 9);
    const Matrix l1 = laplacian(c, 1).matrix;
    const Eigen::FullPivLU<Matrix> lu(l1);
    const Matrix h = lu.kernel();
    REQUIRE(h.cols() == 1);
    CHECK((eps * h).norm() < 1e-10);
    CHECK(oracle::rank(eps) == 9);
}

TEST_CASE("numerical rank", "[operators]")
{
    Rng rng(2);
    const Matrix m = rng.gaussian(6, 3) * rng.gaussian(3, 5);
    CHECK(numerical_rank(m) == 3);
    CHECK(numerical_rank(m) == oracle::rank(m));
    CHECK(numerical_rank(Matrix::Zero(3, 3)) == 0);
}
