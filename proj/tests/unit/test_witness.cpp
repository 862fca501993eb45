#include <catch_amalgamated.hpp>

#include <sheafgauge/diagnostics.hpp>
#include <sheafgauge/spectral.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sheafgauge;
using Catch::Matchers::WithinAbs;

namespace {

const std::vector<WitnessWeight> kWeights{WitnessWeight::Uniform, WitnessWeight::Inverse, WitnessWeight::Heat,
                                          WitnessWeight::GapIndicator};

/** Witness sum written out over the raw eigenvalue list. */
double brute_witness(const Vector& eig, double thresh, double d0, double d1, WitnessWeight w, double t)
{
    if (w == WitnessWeight::GapIndicator) {
        double gap = kInfinity;
        for (Index i = 0; i < eig.size(); ++i) {
            if (eig(i) > thresh) {
                gap = std::min(gap, eig(i));
            }
        }
        return gap <= d1 ? d1 - std::max(d0, gap) : 0.0;
    }
    double total = 0.0;
    for (Index i = 0; i < eig.size(); ++i) {
        const double l = eig(i);
        if (l <= thresh || l > d1) {
            continue;
        }
        const double weight = w == WitnessWeight::Uniform ? 1.0 : w == WitnessWeight::Inverse ? 1.0 / l : std::exp(-t * l);
        total += (d1 - std::max(d0, l)) * weight;
    }
    return total;
}

} // namespace

TEST_CASE("witness config validation and names", "[witness]")
{
    CHECK_THROWS_AS((WitnessConfig{0.5, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((WitnessConfig{-0.1, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((WitnessConfig{0.0, kInfinity}.validate()), ConfigError);
    CHECK_THROWS_AS((WitnessConfig{0.0, 1.0, WitnessWeight::Heat, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((WitnessConfig{0.0, 1.0}.validate()));
    for (WitnessWeight w : kWeights) {
        CHECK(parse_witness_weight(to_string(w)) == w);
    }
    CHECK_THROWS_WITH(parse_witness_weight("flat"), Catch::Matchers::ContainsSubstring("unif, inv, heat, gap"));
}

TEST_CASE("global witness matches the brute-force sum", "[witness][property]")
{
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum s = gen::spectrum_of(rng, gen::random_spectrum(rng, 9));
        const double d0 = rng.uniform(0.0, 1.0);
        const double d1 = d0 + rng.uniform(0.01, 3.0);
        for (WitnessWeight w : kWeights) {
            const WitnessConfig cfg{d0, d1, w, 0.7};
            INFO("trial " << trial << " weight " << to_string(w));
            CHECK_THAT(global_witness(s, cfg),
                       WithinAbs(brute_witness(s.eigenvalues, s.zero_threshold, d0, d1, w, 0.7), 1e-12));
        }
    }
}

TEST_CASE("global witness is monotone in delta1 and antitone in delta0", "[witness][property]")
{
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const Spectrum s = gen::spectrum_of(rng, gen::random_spectrum(rng, 1 + static_cast<Index>(rng.below(10))));
        for (WitnessWeight w : kWeights) {
            const double d0 = rng.uniform(0.0, 1.0);
            const double d1 = d0 + rng.uniform(0.01, 2.0);
            const double more = d1 + rng.uniform(0.0, 2.0);
            const double lower = rng.uniform(0.0, d0);
            INFO("trial " << trial << " weight " << to_string(w));
            CHECK(global_witness(s, {d0, more, w}) >= global_witness(s, {d0, d1, w}));
            CHECK(global_witness(s, {lower, d1, w}) >= global_witness(s, {d0, d1, w}));
            CHECK(global_witness(s, {d0, d1, w}) >= 0.0);
        }
    }
}

TEST_CASE("gap indicator reproduces the closed form", "[witness]")
{
    Vector d(4);
    d << 0.0, 0.25, 0.5, 2.0;
    const Spectrum s = eigendecompose(Matrix(d.asDiagonal()));
    CHECK(global_witness(s, {0.0, 1.0, WitnessWeight::GapIndicator}) == 1.0 - 0.25);
    CHECK(global_witness(s, {0.5, 1.0, WitnessWeight::GapIndicator}) == 1.0 - 0.5);
    CHECK(global_witness(s, {0.0, 0.125, WitnessWeight::GapIndicator}) == 0.0);
    CHECK(global_witness(s, {0.0, 0.25, WitnessWeight::GapIndicator}) == 0.0);

    const WitnessConfig dflt = default_witness_config(s);
    CHECK(dflt.delta1 == 0.5);
    CHECK(dflt.weight == WitnessWeight::GapIndicator);
    CHECK(default_witness_config(eigendecompose(Matrix::Zero(2, 2))).delta1 == 1.0);
}

TEST_CASE("local witness energy accounting", "[witness][property]")
{
    std::vector<CellSheaf> fixtures{trivial_bundle(10, 1), mobius_bundle(10), hidden_twist_bundle({}),
                                    noisy_trivial_bundle(10, 2, 0.25, 3),
                                    constant_sheaf(build_clique_complex(complete_graph(5)), 2)};
    Rng rng(23);
    for (int i = 0; i < 5; ++i) {
        fixtures.push_back(
            build_sheaf_from_features(gen::random_graph(rng, 7, 0.5), gen::random_features(rng, 7)));
    }
    std::size_t idx = 0;
    for (const CellSheaf& sheaf : fixtures) {
        for (int j = 0; j < 2; ++j) {
            const Spectrum s = eigendecompose(laplacian(sheaf, j));
            const double gap = spectral_gap(s);
            const double d1 = std::isfinite(gap) ? 2.0 * gap : 1.0;
            for (WitnessWeight w : kWeights) {
                const LocalWitnessMap m = local_witness(sheaf, j, {0.0, d1, w, 0.5});
                double coface = 0.0;
                double face = 0.0;
                for (double x : m.coface_energy) {
                    coface += x;
                }
                for (double x : m.face_energy) {
                    face += x;
                }
                /** Independent accounting: sum of w(lambda) lambda over the admitted modes. */
                double expected = 0.0;
                for (Index mode : m.admitted_modes) {
                    const double l = s.eigenvalues(mode);
                    expected += (w == WitnessWeight::GapIndicator ? 1.0 : witness_weight(w, l, 0.5)) * l;
                    CHECK(l > s.zero_threshold);
                }
                INFO("fixture " << idx << " degree " << j << " weight " << to_string(w));
                CHECK_THAT(coface + face, WithinAbs(m.weighted_energy, 1e-8));
                CHECK_THAT(m.weighted_energy, WithinAbs(expected, 1e-8));
                        double scores = 0.0;
                for (double x : m.scores) {
                    scores += x;
                }
                double incident_faces = 0.0;
                if (j > 0) {
                    for (const Incidence& inc : sheaf.complex().incidences(j)) {
                        incident_faces += m.face_energy[static_cast<std::size_t>(inc.face)];
                    }
                }
                CHECK_THAT(scores, WithinAbs(static_cast<double>(j + 2) * coface + incident_faces, 1e-8));
            }
        }
        ++idx;
    }
}

TEST_CASE("gap weight admits exactly the lowest positive cluster", "[witness]")
{
    const CellSheaf m = mobius_bundle(10);
    const Spectrum s = eigendecompose(laplacian(m, 0));
    const LocalWitnessMap w = local_witness(m, 0, {0.0, 1.0, WitnessWeight::GapIndicator});
    CHECK(w.admitted_modes == std::vector<Index>{0, 1});
    CHECK_THAT(w.weighted_energy, WithinAbs(2.0 * lambda_min(s), 1e-12));
    /** Rotation symmetric: every vertex gets the same score. */
    for (double x : w.scores) {
        CHECK_THAT(x, WithinAbs(w.scores[0], 1e-10));
    }
    CHECK_THAT(participation_ratio(w.scores), WithinAbs(10.0, 1e-8));

    const LocalWitnessMap none = local_witness(m, 0, {0.0, 0.05, WitnessWeight::GapIndicator});
    CHECK(none.admitted_modes.empty());

    const CellSheaf t = trivial_bundle(10, 1);
    const LocalWitnessMap k = local_witness(t, 0, {0.0, 10.0, WitnessWeight::Uniform});
    CHECK(k.admitted_modes.size() == 9);
}

TEST_CASE("participation ratio and argmax", "[witness]")
{
    CHECK(participation_ratio({1.0, 1.0, 1.0, 1.0}) == 4.0);
    CHECK(participation_ratio({0.0, 3.0, 0.0}) == 1.0);
    CHECK(participation_ratio({0.0, 0.0}) == 0.0);
    CHECK(argmax({0.1, 0.7, 0.7, 0.2}) == 1);
    CHECK_THROWS_AS(argmax({}), ConfigError);
    CHECK_THROWS_AS(local_witness(mobius_bundle(5), 2, {}), ConfigError);
}

TEST_CASE("hidden twist localizes on the defect edge", "[witness]")
{
    const CellSheaf twist = hidden_twist_bundle({});
    const LocalWitnessMap m = local_witness(twist, 0, {0.0, 0.9 * 2.0 * (1.0 - std::cos(std::numbers::pi / 10.0)),
                                                       WitnessWeight::Uniform});
    REQUIRE_FALSE(m.admitted_modes.empty());
    const Index defect = *twist.complex().find_edge(0, 9);
    CHECK(argmax(m.coface_energy) == defect);
}
