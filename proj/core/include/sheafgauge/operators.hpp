#pragma once

#include "sheafgauge/sheaf.hpp"
#include "sheafgauge/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sheafgauge {

enum class Provenance { Base, GeometricCone, AlgebraicCone, Relative, Utilization };

std::string to_string(Provenance p);

/** Symmetric PSD operator on a cochain space, tagged with its origin. */
struct SheafLaplacian {
    int degree = 0;
    Matrix matrix;
    Provenance provenance = Provenance::Base;
    std::string label;

    Index dim() const { return matrix.rows(); }
};

/** Coboundary d_j : C^j -> C^{j+1} with blocks [c : f] * rho_{f -> c}. j must be 0 or 1. */
Matrix coboundary(const CellSheaf& sheaf, int j);

/** Hodge Laplacian L_j for j in {0, 1}. */
SheafLaplacian laplacian(const CellSheaf& sheaf, int j);

/** x^T L x. Throws DimensionError on length mismatch. */
double consistency_energy(const SheafLaplacian& laplacian, const Vector& x);

/** Inclusive test x^T L x <= delta. Negative delta raises ConfigError. */
bool is_delta_feasible(const SheafLaplacian& laplacian, const Vector& x, double delta);

enum class GroundingMode { VertexLevel, CochainLevel };
enum class TargetKind { Constant, DegreeZeroConcentrated };

/**
 * Morphism from the sheaf into a ground of dimension target_dim.
 *
 * Vertex-level groundings carry one map per cell (target_dim x stalk_dim).
 * Cochain-level groundings carry a single map C^1 -> R^target_dim.
 */
struct GroundingMorphism {
    GroundingMode mode = GroundingMode::CochainLevel;
    TargetKind target = TargetKind::Constant;
    Index target_dim = 0;
    std::array<std::vector<Matrix>, 3> cell_maps;
    Matrix cochain_map;
};

/** Vertex-level grounding from explicit per-cell maps, shape checked. */
GroundingMorphism vertex_grounding(const CellSheaf& sheaf, std::array<std::vector<Matrix>, 3> maps,
                                   TargetKind target = TargetKind::Constant);
/** Cochain-level grounding C^1 -> R^rows, shape checked. */
GroundingMorphism cochain_grounding(const CellSheaf& sheaf, Matrix map);

/**
 * Ambient-embedding grounding: each stalk basis zero-padded to the largest
 * ambient dimension. Cochain level stacks the edge bases side by side.
 */
GroundingMorphism grounding_from_padding(const CellSheaf& sheaf, GroundingMode mode,
                                         TargetKind target = TargetKind::Constant);

/** Identity on C^1. */
GroundingMorphism full_rank_grounding(const CellSheaf& sheaf);
/**
 * Orthogonal projection onto the complement of ker L1, written in an
 * orthonormal basis of that complement. Kills every harmonic 1-cochain.
 */
GroundingMorphism deficient_grounding(const CellSheaf& sheaf);
/** Zero map C^1 -> R^target_dim. */
GroundingMorphism zero_grounding(const CellSheaf& sheaf, Index target_dim);

/**
 * Basis (columns) of all cosection families phi with rho^T phi_tau = phi_sigma
 * on every incidence; each column lists phi over all cells of dimensions 0..2.
 */
Matrix compatible_cosections(const CellSheaf& sheaf);

/** Random vertex-level grounding into the constant sheaf with zero incidence defect. */
GroundingMorphism random_compatible_grounding(const CellSheaf& sheaf, Index target_dim, std::uint64_t seed);

/** Vertex-level to cochain level: the edge maps placed side by side. */
GroundingMorphism to_cochain_level(const CellSheaf& sheaf, const GroundingMorphism& grounding);

/** Per-incidence defect eps_tau [tau:sigma] rho - d_W(sigma -> tau) eps_sigma. */
struct IncidenceDefect {
    std::array<std::vector<Matrix>, 2> blocks; ///< aligned with CliqueComplex::incidences
    double total_norm = 0.0;                   ///< Frobenius norm over all blocks
    double max_block_norm = 0.0;
};

IncidenceDefect incidence_defect(const CellSheaf& sheaf, const GroundingMorphism& grounding);

/** Finite cochain complex C^lo -> ... -> C^hi with explicit differentials. */
class CochainComplex {
public:
    CochainComplex() = default;
    /** differentials[i] maps degree lo+i to lo+i+1; shapes are checked. */
    CochainComplex(int lowest_degree, std::vector<Index> dims, std::vector<Matrix> differentials);

    int lowest_degree() const { return lo_; }
    int highest_degree() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
    Index dim(int n) const;
    /** d^n : C^n -> C^{n+1}; a correctly shaped zero matrix outside the stored range. */
    Matrix differential(int n) const;
    /** Largest Frobenius norm of d^{n+1} d^n. */
    double square_residual() const;
    /** d^{n-1} d^{n-1}^T + d^n^T d^n. */
    Matrix laplacian(int n) const;
    /** Orthonormal basis of ker laplacian(n). */
    Matrix harmonic_basis(int n) const;
    /** dim C^n - rank d^n - rank d^{n-1}. */
    Index betti(int n) const;

private:
    int lo_ = 0;
    std::vector<Index> dims_;
    std::vector<Matrix> diffs_;
};

/** Numerical rank with singular values above rel_tol * max(1, sigma_max). */
Index numerical_rank(const Matrix& m, double rel_tol = 1e-8);

/** Degrees 0..2 of the sheaf cochain complex. */
CochainComplex sheaf_cochain_complex(const CellSheaf& sheaf);

/**
 * Cochain complex of the ground sheaf. Constant targets have C^n = W^{|K_n|};
 * `augmented` prepends W in degree -1 mapping diagonally into C^0.
 */
CochainComplex target_cochain_complex(const CliqueComplex& complex, Index target_dim, TargetKind target,
                                      bool augmented = false);

/** Chain map components eps^n keyed by degree (absent entries are zero). */
using ChainMap = std::map<int, Matrix>;

ChainMap grounding_chain_map(const CellSheaf& sheaf, const GroundingMorphism& grounding);

/** Cone^n = C^{n+1}(F) + C^n(W), d = [[-d_F, 0], [-eps, d_W]]. */
CochainComplex mapping_cone(const CochainComplex& base, const CochainComplex& target, const ChainMap& eps);

/** Cone[1]^n = C^n(F) + C^{n-1}(W), d = [[d_F, 0], [eps, -d_W]]. */
CochainComplex translated_cone(const CochainComplex& base, const CochainComplex& target, const ChainMap& eps);

struct AlgebraicCone {
    CochainComplex base;
    CochainComplex target;
    ChainMap chain_map;
    CochainComplex cone;
    bool is_complex = true;
    double square_residual = 0.0;
    double defect_norm = 0.0;
};

/** Mapping cone of a vertex-level grounding. Non-complex results are flagged, not thrown. */
AlgebraicCone algebraic_cone(const CellSheaf& sheaf, const GroundingMorphism& grounding, double tol = 1e-10);

/**
 * Sheaf on the cone complex: apex and cone-cell stalks equal to the ground,
 * restrictions eps_sigma from base cells and identities from cone cells.
 * Requires a vertex-level grounding into the constant target.
 */
CellSheaf geometric_cone_sheaf(const CellSheaf& sheaf, const GroundingMorphism& grounding);

struct ConeEquivalenceReport {
    bool hypotheses_met = false; ///< incidence defect below tolerance
    double defect_norm = 0.0;
    std::vector<double> residuals; ///< per degree max |Phi d_geo - d_alg Phi|
    double max_residual = 0.0;
    bool passed = false;
};

/** Compares geometric cone coboundaries with the translated algebraic cone under the cell identification. */
ConeEquivalenceReport verify_cone_equivalence(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                              double defect_tol = 1e-10, double residual_tol = 1e-12);

struct LesNode {
    std::string label;
    Index dim = 0;
    Index rank_in = 0;
    Index rank_out = 0;
    double composite_norm = 0.0;
    bool exact = false;
};

struct ExactnessReport {
    bool hypotheses_met = false;
    double defect_norm = 0.0;
    std::vector<LesNode> nodes;
    std::map<int, Index> betti_base;
    std::map<int, Index> betti_target;
    std::map<int, Index> betti_cone;
    double max_composite_norm = 0.0;
    bool exact = false;
};

/** Rank exactness of H(F) -> H(W) -> H(Cone) -> H(F)[+1] at every node. */
ExactnessReport verify_long_exact_sequence(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                           double defect_tol = 1e-10);

/** Four spectral channels of a sheaf with a cochain-level grounding. */
struct ChannelSet {
    SheafLaplacian local_feasibility; ///< L0
    SheafLaplacian intrinsic;         ///< L1
    SheafLaplacian relative;          ///< L1 + eps^T eps
    SheafLaplacian utilization;       ///< eps eps^T (auxiliary)
    Matrix grounding;
};

/** Throws ModeError for vertex-level input; convert with to_cochain_level first. */
ChannelSet channel_set(const CellSheaf& sheaf, const GroundingMorphism& grounding);

/** Degree-0 Laplacian of the algebraic cone split into its diagonal blocks and coupling. */
struct BlockDecompositionReport {
    Matrix cone_laplacian;
    Matrix upper_block;   ///< L1 + eps1^T eps1 on C^1(F)
    Matrix lower_block;   ///< L_W + eps0 eps0^T on C^0(W)
    double coupling_norm = 0.0;
    bool decoupled = false;
    double max_spectral_difference = 0.0;
    bool spectra_match = false;
};

BlockDecompositionReport verify_block_decomposition(const CellSheaf& sheaf, const GroundingMorphism& grounding,
                                                    double coupling_tol = 1e-10, double spectral_tol = 1e-8);

} // namespace sheafgauge
