#pragma once

#include "sheafgauge/complex.hpp"
#include "sheafgauge/operators.hpp"
#include "sheafgauge/types.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sheafgauge {

/**
 * Ascending eigen-decomposition of a symmetric PSD operator.
 *
 * Eigenvalues within the zero threshold 1e-10 + 1e-8 * lambda_max form the
 * kernel. Consecutive eigenvalues closer than 1e-8 * lambda_max share a
 * cluster and enter every filtration level together.
 */
struct Spectrum {
    Vector eigenvalues;  ///< ascending, small negative round-off clamped to 0
    Matrix eigenvectors; ///< orthonormal columns matching eigenvalues
    double lambda_max = 0.0;
    double zero_threshold = 0.0;
    std::vector<Index> cluster; ///< cluster id per eigenvalue
    Vector levels;              ///< filtration level: 0 for the kernel, cluster minimum otherwise

    Index size() const { return eigenvalues.size(); }
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/** Zero threshold for an operator with the given largest eigenvalue. */
double zero_threshold(double lambda_max);

/**
 * Throws NumericalError when the matrix is asymmetric beyond
 * 1e-10 * max(1, max|L|) or has an eigenvalue below -1e-8 * lambda_max.
 */
Spectrum eigendecompose(const Matrix& laplacian);
Spectrum eigendecompose(const SheafLaplacian& laplacian);

/** Spectrum with eigenvalues multiplied by a positive factor; eigenvectors unchanged. */
Spectrum scaled(const Spectrum& s, double factor);

/**
 * Filtration shifted up by a non-negative amount: eigenvalues and levels grow
 * by shift, kernel modes enter at level shift. Eigenvectors unchanged.
 */
Spectrum shifted(const Spectrum& s, double shift);

Index kernel_dim(const Spectrum& s);
/** Smallest eigenvalue above the zero threshold, +inf when there is none. */
double spectral_gap(const Spectrum& s);
/** Smallest eigenvalue, 0 for an empty spectrum. */
double lambda_min(const Spectrum& s);

/** Orthonormal basis of the span of eigenvectors whose level is at most delta. */
Matrix harmonic_space(const Spectrum& s, double delta);
Index harmonic_dim(const Spectrum& s, double delta);

/** True iff the kernel is trivial but the probe_delta harmonic space is not. */
bool is_almost_non_exact(const Spectrum& s, double probe_delta);

/** dim H_delta at each grid point; throws ConfigError on an unsorted grid. */
std::vector<Index> indicator_profile(const Spectrum& s, const std::vector<double>& grid);

enum class WitnessWeight { Uniform, Inverse, Heat, GapIndicator };

struct WitnessConfig {
    double delta0 = 0.0;
    double delta1 = 1.0;
    WitnessWeight weight = WitnessWeight::GapIndicator;
    double heat_time = 1.0;

    /** Throws ConfigError unless 0 <= delta0 < delta1 and heat_time > 0. */
    void validate() const;
};

/** Short names: unif, inv, heat, gap. */
std::string to_string(WitnessWeight weight);
/** Throws ConfigError listing the valid names. */
WitnessWeight parse_witness_weight(const std::string& name);

/** Weight w(lambda) for the non-gap weights. */
double witness_weight(WitnessWeight weight, double lambda, double heat_time);

/** Sum over positive eigenvalues lambda <= delta1 of (delta1 - max(delta0, lambda)) w(lambda). */
double global_witness(const Spectrum& s, const WitnessConfig& config);

/** Default witness window: delta0 = 0, delta1 = 2 * spectral gap, gap-indicator weight. */
WitnessConfig default_witness_config(const Spectrum& s);

/**
 * Per-cell witness scores. Coface energies are stored per (j+1)-cell and face
 * energies per (j-1)-cell, each already weighted and summed over admitted modes.
 */
struct LocalWitnessMap {
    int degree = 0;
    double delta = 0.0;
    std::vector<double> scores;
    std::vector<double> coface_energy;
    std::vector<double> face_energy;
    std::vector<Index> admitted_modes;
    /** Sum over admitted modes of w(lambda) * lambda. */
    double weighted_energy = 0.0;
};

/**
 * Eigenvector attribution for an operator on C^j of a sheaf. `up` is d_j and
 * `down` is d_{j-1} (empty for j = 0). Kernel modes are never admitted; with
 * the gap-indicator weight the lowest positive cluster is admitted with unit
 * weight, otherwise modes with lambda <= delta1 carry w(lambda).
 */
LocalWitnessMap local_witness(const CellSheaf& sheaf, int j, const Spectrum& s, const Matrix& up,
                              const Matrix& down, const WitnessConfig& config);

/** Local witness of the sheaf Laplacian L_j. */
LocalWitnessMap local_witness(const CellSheaf& sheaf, int j, const WitnessConfig& config);

/** Participation ratio (sum s)^2 / sum s^2; 0 for an all-zero map. */
double participation_ratio(const std::vector<double>& scores);
Index argmax(const std::vector<double>& scores);

enum class InterleavingMode { Subspace, Profile };

struct InterleavingResult {
    double eta = 0.0;
    InterleavingMode mode = InterleavingMode::Subspace;
};

/**
 * Smallest shift eta over candidate level differences with H_a(d) inside
 * H_b(d + eta) and H_b(d) inside H_a(d + eta). Subspace mode needs a common
 * ambient space; profile mode compares sorted levels and returns +inf when
 * the dimensions differ.
 */
InterleavingResult interleaving_shift(const Spectrum& a, const Spectrum& b, InterleavingMode mode,
                                      double containment_tol = 1e-8);
/** Subspace mode when ambient dimensions agree, profile mode otherwise. */
InterleavingResult interleaving_shift(const Spectrum& a, const Spectrum& b);

struct NormalizedOperator {
    SheafLaplacian op;
    double scale = 1.0;
    bool zero_operator = false;
};

/** Scales L so that trace / rank = 1. A zero operator is returned unchanged and flagged. */
NormalizedOperator normalize_spectrum(const SheafLaplacian& laplacian);
/** Same normalization applied to an existing spectrum. */
Spectrum normalized(const Spectrum& s, bool* zero_operator = nullptr);

/**
 * Operators of a grounded system as they enter the cone block operator
 * [[L_F + eps^T eps, C], [C^T, L_W + eps eps^T]].
 */
struct GroundedOperators {
    Matrix base_laplacian;   ///< L_F
    Matrix target_laplacian; ///< L_W
    Matrix grounding;        ///< eps : base -> target
    Matrix coupling;         ///< off-diagonal block, zero under the intertwining hypothesis

    Matrix cone_operator() const;
};

/** Relative-channel system of a sheaf with a cochain-level grounding (L_W = 0, no coupling). */
GroundedOperators grounded_operators(const CellSheaf& sheaf, const GroundingMorphism& grounding);

struct ConeReductionReport {
    double coupling_residual = 0.0;
    double commutator_residual = 0.0;
    bool hypotheses_met = false;
    double eta = 0.0;          ///< base interleaving, max over both blocks
    double v = 0.0;            ///< max |b - b'| over Gramian eigenvalue pairs
    double theta = 0.0;        ///< interleaving of the Gramian filtrations
    double cone_eta = 0.0;     ///< measured interleaving of the cone operators
    bool bound_v_holds = false;
    bool bound_theta_holds = false;
};

/** Checks the commuting hypotheses and, when they hold, the eta + v and eta + theta cone bounds. */
ConeReductionReport verify_cone_reduction(const GroundedOperators& a, const GroundedOperators& b,
                                          double hypothesis_tol = 1e-8, double slack = 1e-8);

} // namespace sheafgauge
