#pragma once

#include "sheafgauge/types.hpp"

#include <cstdint>
#include <random>

namespace sheafgauge {

/**
 * Seeded generator with platform independent output.
 *
 * Normals come from an explicit Box-Muller transform of mt19937_64 words.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /** Uniform draw in [0, 1). */
    double uniform();
    /** Uniform draw in [lo, hi). */
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    /** Uniform integer in [0, bound). */
    std::uint64_t below(std::uint64_t bound);

    Matrix gaussian(Index rows, Index cols);
    /** Haar-ish random orthogonal matrix from QR of a Gaussian matrix. */
    Matrix orthogonal(Index n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sheafgauge
