#pragma once

#include "sheafgauge/complex.hpp"
#include "sheafgauge/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace sheafgauge {

/** Stalk given by an orthonormal basis of a subspace of an ambient space. */
struct Stalk {
    Matrix basis; ///< ambient_dim x dim, orthonormal columns

    Index dim() const { return basis.cols(); }
    Index ambient_dim() const { return basis.rows(); }

    /** Coordinate stalk R^k with identity basis. */
    static Stalk standard(Index k) { return Stalk{Matrix::Identity(k, k)}; }
};

/**
 * Cellular sheaf on a truncated clique complex.
 *
 * Restriction maps are stored aligned with CliqueComplex::incidences: entry k
 * of restrictions(1) is the map from the face stalk into the coface stalk of
 * incidences(1)[k], and likewise for dimension 2.
 */
class CellSheaf {
public:
    CellSheaf() = default;
    /** Throws DimensionError when stalk counts or map shapes are inconsistent. */
    CellSheaf(CliqueComplex complex, std::array<std::vector<Stalk>, 3> stalks,
              std::array<std::vector<Matrix>, 2> restrictions);

    const CliqueComplex& complex() const { return complex_; }
    const std::vector<Stalk>& stalks(int dim) const;
    const Stalk& stalk(int dim, Index cell) const;
    Index stalk_dim(int dim, Index cell) const { return stalk(dim, cell).dim(); }
    /** Total dimension of the cochain space C^dim. */
    Index cochain_dim(int dim) const;
    /** Offset of a cell's block inside C^dim. */
    Index cochain_offset(int dim, Index cell) const;
    /** Largest ambient dimension over all stalks. */
    Index max_ambient_dim() const;

    const std::vector<Matrix>& restrictions(int coface_dim) const;
    /** Restriction attached to incidence position k of incidences(coface_dim). */
    const Matrix& restriction(int coface_dim, Index k) const;
    /** Restriction from face into coface; throws IncidenceError when not incident. */
    const Matrix& restriction(CellId face, CellId coface) const;
    /** Replaces one restriction, checking its shape. */
    void set_restriction(int coface_dim, Index k, Matrix map);

    /** Outcome of the functoriality check performed at construction time by a builder. */
    bool validated() const { return validated_; }
    void set_validated(bool v) { validated_ = v; }

private:
    void rebuild_offsets();

    CliqueComplex complex_;
    std::array<std::vector<Stalk>, 3> stalks_;
    std::array<std::vector<Matrix>, 2> restrictions_;
    std::array<std::vector<Index>, 3> offsets_;
    bool validated_ = true;
};

/** Thresholds of the feature-to-stalk pipeline. */
struct FeaturePipelineConfig {
    double svd_tol = 1e-8;        ///< relative to the largest singular value; tolerances lie in (0, 1]
    double edge_align_tol = 0.9;  ///< principal cosines strictly above are kept
    double tri_eig_tol = 0.5;     ///< triple-projector eigenvalues strictly above are kept
    double tri_exponent = 1.0;    ///< eigenvalues are raised to this power before thresholding
    double functoriality_tol = 1e-8;

    /** Throws ConfigError when a threshold is outside its range. */
    void validate() const;

    bool operator==(const FeaturePipelineConfig&) const = default;
};

/** Feature matrices (ambient x samples) per vertex. */
using FeatureMap = std::map<Index, Matrix>;

/** Zero-pads each feature matrix to the common row count and extracts an orthonormal stalk. */
std::vector<Stalk> node_stalks_from_features(const FeatureMap& features, Index vertex_count,
                                             const FeaturePipelineConfig& config = {});

struct EdgeIntersection {
    Stalk stalk;
    Matrix from_u; ///< restriction from the u stalk
    Matrix from_v; ///< restriction from the v stalk
    Vector cosines; ///< principal cosines of the pair
};

/**
 * Approximate intersection of two node stalks through principal angles.
 * The edge basis is the normalized bisector of each aligned pair.
 */
EdgeIntersection edge_stalk_intersection(const Stalk& u, const Stalk& v,
                                         const FeaturePipelineConfig& config = {});

struct TriangleIntersection {
    Stalk stalk;
    Matrix from_uv;
    Matrix from_uw;
    Matrix from_vw;
    Vector eigenvalues; ///< spectrum of the triple-projector operator, descending
};

/** Soft intersection of the three edge stalks of a triangle. */
TriangleIntersection triangle_stalk_soft_intersection(const Stalk& uv, const Stalk& vw,
                                                      const Stalk& uw,
                                                      const FeaturePipelineConfig& config = {});

/** Functoriality defect on one (vertex, triangle) pair. */
struct FunctorialityViolation {
    Index triangle = 0;
    Index vertex = 0;
    Index edge_a = 0;
    Index edge_b = 0;
    double defect = 0.0;
};

struct SheafValidationReport {
    bool ok = true;
    double max_defect = 0.0;
    std::vector<FunctorialityViolation> violations; ///< only pairs above tolerance
};

/** Checks rho_{e->t} rho_{v->e} = rho_{e'->t} rho_{v->e'} for every vertex of every triangle. */
SheafValidationReport validate_sheaf(const CellSheaf& sheaf, double tol = 1e-8);

/**
 * Builds the clique complex, the stalks and all restrictions from features,
 * then records the functoriality check in CellSheaf::validated.
 */
CellSheaf build_sheaf_from_features(const Graph& graph, const FeatureMap& features,
                                    const FeaturePipelineConfig& config = {});

/** Constant sheaf with stalk R^k and identity restrictions. */
CellSheaf constant_sheaf(const CliqueComplex& complex, Index k);

/**
 * Rank-k bundle on the n-cycle. The restriction from u into edge (u, v), u < v,
 * is the identity and the one from v is twists[(u, v)] (identity if absent).
 * link_strengths scales both restrictions on an edge.
 * Twists must be orthogonal; a non-orthogonal twist raises ValidationError.
 */
CellSheaf make_line_bundle(Index n, Index stalk_dim, const std::map<Edge, Matrix>& twists,
                           const std::map<Edge, double>& link_strengths = {});

/** Edge closing the n-cycle, (0, n-1). */
Edge closing_edge(Index n);

CellSheaf trivial_bundle(Index n, Index stalk_dim);
/** Rank-k bundle with twist -I on the closing edge. */
CellSheaf mobius_bundle(Index n, Index stalk_dim = 1);

struct HiddenTwistParams {
    Index n = 10;
    double tau = 0.3;           ///< rotation angle of the twist
    double link_strength = 0.1; ///< scale of both restrictions on the defect edge
};

/** Rank-2 bundle with a rotation by tau on a weak closing edge. */
CellSheaf hidden_twist_bundle(const HiddenTwistParams& params);

/**
 * Composes each edge restriction from the v endpoint with a random rotation
 * of angle N(0, sigma^2). sigma == 0 returns an identical copy.
 */
CellSheaf add_restriction_noise(const CellSheaf& sheaf, double sigma, std::uint64_t seed);

/** Rank-k trivial bundle with restriction noise. */
CellSheaf noisy_trivial_bundle(Index n, Index stalk_dim, double sigma, std::uint64_t seed);

} // namespace sheafgauge
