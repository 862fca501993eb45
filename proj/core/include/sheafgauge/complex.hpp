#pragma once

#include "sheafgauge/types.hpp"

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <vector>

namespace sheafgauge {

using Edge = std::array<Index, 2>;
using Triangle = std::array<Index, 3>;

/** Undirected simple graph on vertices 0..vertex_count-1. */
struct Graph {
    Index vertex_count = 0;
    std::vector<Edge> edges;
};

/**
 * Throws InputError on out-of-range endpoints, self-loops or duplicate
 * edges. The message names the offending edge.
 */
void validate_graph(const Graph& graph);

Graph cycle_graph(Index n);
Graph complete_graph(Index n);
Graph path_graph(Index n);

/** A cell of the complex, addressed by dimension and position. */
struct CellId {
    int dim = 0;
    Index index = 0;
    auto operator<=>(const CellId&) const = default;
};

/** Oriented face relation between a coface and one of its codimension-1 faces. */
struct Incidence {
    Index coface = 0;
    Index face = 0;
    int sign = 0;
};

/**
 * Clique complex truncated at dimension 2.
 *
 * Cells of each dimension are sorted ascending by vertex tuple. Incidences of
 * dimension j are stored per coface in canonical order: edge i owns entries
 * 2i and 2i+1 (faces u, v), triangle i owns entries 3i..3i+2 (faces uv, uw,
 * vw). Signs are (-1)^p where p is the position of the omitted vertex in the
 * oriented vertex tuple. Cone complexes orient cone cells apex-first.
 */
class CliqueComplex {
public:
    CliqueComplex() = default;

    Index vertex_count() const { return vertex_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    /** Apex vertex when this complex was produced by cone_complex. */
    std::optional<Index> apex() const { return apex_; }

    /** Number of cells of dimension dim (0 for dim outside 0..2). */
    Index cell_count(int dim) const;

    /** All incidences with cofaces of dimension dim (1 or 2). */
    std::span<const Incidence> incidences(int dim) const;
    /** Incidences owned by one coface, in canonical face order. */
    std::span<const Incidence> faces_of(int dim, Index cell) const;
    /** Positions into incidences(dim + 1) whose face is the given dim-cell. */
    const std::vector<Index>& cofaces_of(int dim, Index cell) const;
    /** Position of the first incidence owned by a coface. */
    Index incidence_offset(int dim, Index cell) const;

    std::optional<Index> find_edge(Index u, Index v) const;
    std::optional<Index> find_triangle(Index u, Index v, Index w) const;

    /** Vertices of a cell, ascending. */
    std::vector<Index> cell_vertices(CellId cell) const;
    /** Vertices of a cell in orientation order (apex first for cone cells). */
    std::vector<Index> oriented_vertices(CellId cell) const;
    bool is_cone_cell(CellId cell) const;

    /** Orientation sign [cell : face]; throws IncidenceError when not incident. */
    int incidence_sign(CellId cell, CellId face) const;

    friend CliqueComplex build_clique_complex(const Graph& graph);
    friend CliqueComplex cone_complex(const CliqueComplex& base);

private:
    void finalize();

    Index vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::optional<Index> apex_;
    std::array<std::vector<Incidence>, 2> incidences_;
    std::array<std::vector<std::vector<Index>>, 2> cofaces_;
};

/** Graph of the 1-skeleton. */
Graph skeleton(const CliqueComplex& complex);

/** Enumerates all edges and triangles of the clique complex of a valid graph. */
CliqueComplex build_clique_complex(const Graph& graph);

/**
 * Cone over the complex with apex index vertex_count(). Adds one cone edge per
 * vertex and one cone triangle per base edge; base triangles are not coned.
 * Throws ValidationError when the input already is a cone.
 */
CliqueComplex cone_complex(const CliqueComplex& base);

/** Euler characteristic of the truncated complex. */
Index euler_characteristic(const CliqueComplex& complex);

} // namespace sheafgauge
