#include "sheafgauge/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

namespace sheafgauge {

namespace {

std::string edge_text(const Edge& e)
{
    std::ostringstream os;
    os << "(" << e[0] << ", " << e[1] << ")";
    return os.str();
}

} // namespace

void validate_graph(const Graph& graph)
{
    if (graph.vertex_count < 0) {
        throw InputError("graph: negative vertex count " + std::to_string(graph.vertex_count));
    }
    std::set<Edge> seen;
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        const Edge& e = graph.edges[i];
        const std::string where = "graph: edge #" + std::to_string(i) + " " + edge_text(e);
        if (e[0] < 0 || e[1] < 0 || e[0] >= graph.vertex_count || e[1] >= graph.vertex_count) {
            throw InputError(where + " references a vertex outside 0.." +
                             std::to_string(graph.vertex_count - 1));
        }
        if (e[0] == e[1]) {
            throw InputError(where + " is a self-loop");
        }
        const Edge key{std::min(e[0], e[1]), std::max(e[0], e[1])};
        if (!seen.insert(key).second) {
            throw InputError(where + " is a duplicate");
        }
    }
}

Graph cycle_graph(Index n)
{
    if (n < 3) {
        throw ConfigError("cycle_graph: need n >= 3, got " + std::to_string(n));
    }
    Graph g{n, {}};
    for (Index i = 0; i < n; ++i) {
        g.edges.push_back({i, (i + 1) % n});
    }
    return g;
}

Graph complete_graph(Index n)
{
    if (n < 1) {
        throw ConfigError("complete_graph: need n >= 1, got " + std::to_string(n));
    }
    Graph g{n, {}};
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            g.edges.push_back({u, v});
        }
    }
    return g;
}

Graph path_graph(Index n)
{
    if (n < 1) {
        throw ConfigError("path_graph: need n >= 1, got " + std::to_string(n));
    }
    Graph g{n, {}};
    for (Index i = 0; i + 1 < n; ++i) {
        g.edges.push_back({i, i + 1});
    }
    return g;
}

Index CliqueComplex::cell_count(int dim) const
{
    switch (dim) {
    case 0: return vertex_count_;
    case 1: return static_cast<Index>(edges_.size());
    case 2: return static_cast<Index>(triangles_.size());
    default: return 0;
    }
}

std::span<const Incidence> CliqueComplex::incidences(int dim) const
{
    if (dim != 1 && dim != 2) {
        throw IncidenceError("incidences: dimension must be 1 or 2, got " + std::to_string(dim));
    }
    return incidences_[static_cast<std::size_t>(dim - 1)];
}

Index CliqueComplex::incidence_offset(int dim, Index cell) const
{
    if (dim != 1 && dim != 2) {
        throw IncidenceError("incidence_offset: dimension must be 1 or 2");
    }
    if (cell < 0 || cell >= cell_count(dim)) {
        throw IncidenceError("incidence_offset: cell " + std::to_string(cell) + " out of range");
    }
    return cell * (dim + 1);
}

std::span<const Incidence> CliqueComplex::faces_of(int dim, Index cell) const
{
    const Index off = incidence_offset(dim, cell);
    return incidences(dim).subspan(static_cast<std::size_t>(off), static_cast<std::size_t>(dim + 1));
}

const std::vector<Index>& CliqueComplex::cofaces_of(int dim, Index cell) const
{
    if (dim != 0 && dim != 1) {
        throw IncidenceError("cofaces_of: dimension must be 0 or 1");
    }
    if (cell < 0 || cell >= cell_count(dim)) {
        throw IncidenceError("cofaces_of: cell " + std::to_string(cell) + " out of range");
    }
    return cofaces_[static_cast<std::size_t>(dim)][static_cast<std::size_t>(cell)];
}

std::optional<Index> CliqueComplex::find_edge(Index u, Index v) const
{
    const Edge key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) {
        return std::nullopt;
    }
    return static_cast<Index>(it - edges_.begin());
}

std::optional<Index> CliqueComplex::find_triangle(Index u, Index v, Index w) const
{
    Triangle key{u, v, w};
    std::sort(key.begin(), key.end());
    auto it = std::lower_bound(triangles_.begin(), triangles_.end(), key);
    if (it == triangles_.end() || *it != key) {
        return std::nullopt;
    }
    return static_cast<Index>(it - triangles_.begin());
}

std::vector<Index> CliqueComplex::cell_vertices(CellId cell) const
{
    if (cell.index < 0 || cell.index >= cell_count(cell.dim)) {
        throw IncidenceError("cell_vertices: no cell of dimension " + std::to_string(cell.dim) +
                             " at index " + std::to_string(cell.index));
    }
    switch (cell.dim) {
    case 0: return {cell.index};
    case 1: {
        const Edge& e = edges_[static_cast<std::size_t>(cell.index)];
        return {e[0], e[1]};
    }
    default: {
        const Triangle& t = triangles_[static_cast<std::size_t>(cell.index)];
        return {t[0], t[1], t[2]};
    }
    }
}

bool CliqueComplex::is_cone_cell(CellId cell) const
{
    if (!apex_) {
        return false;
    }
    const auto verts = cell_vertices(cell);
    return std::find(verts.begin(), verts.end(), *apex_) != verts.end();
}

std::vector<Index> CliqueComplex::oriented_vertices(CellId cell) const
{
    auto verts = cell_vertices(cell);
    if (apex_ && verts.size() > 1 && verts.back() == *apex_) {
        std::rotate(verts.begin(), verts.end() - 1, verts.end());
    }
    return verts;
}

int CliqueComplex::incidence_sign(CellId cell, CellId face) const
{
    if (face.dim != cell.dim - 1 || cell.dim < 1 || cell.dim > 2) {
        throw IncidenceError("incidence_sign: cells of dimensions " + std::to_string(cell.dim) +
                             " and " + std::to_string(face.dim) + " are not incident");
    }
    cell_vertices(face);
    for (const Incidence& inc : faces_of(cell.dim, cell.index)) {
        if (inc.face == face.index) {
            return inc.sign;
        }
    }
    throw IncidenceError("incidence_sign: cell " + std::to_string(face.index) + " of dimension " +
                         std::to_string(face.dim) + " is not a face of cell " +
                         std::to_string(cell.index));
}

void CliqueComplex::finalize()
{
    for (auto& list : incidences_) {
        list.clear();
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const CellId cell{1, static_cast<Index>(i)};
        const auto oriented = oriented_vertices(cell);
        for (int k = 0; k < 2; ++k) {
            const Index face = edges_[i][static_cast<std::size_t>(k)];
            const Index omitted = edges_[i][static_cast<std::size_t>(1 - k)];
            const auto pos = std::find(oriented.begin(), oriented.end(), omitted) - oriented.begin();
            incidences_[0].push_back({static_cast<Index>(i), face, pos % 2 == 0 ? 1 : -1});
        }
    }
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
        const CellId cell{2, static_cast<Index>(i)};
        const Triangle& t = triangles_[i];
        const auto oriented = oriented_vertices(cell);
        const std::array<std::array<Index, 3>, 3> faces{{{t[0], t[1], t[2]}, {t[0], t[2], t[1]}, {t[1], t[2], t[0]}}};
        for (const auto& f : faces) {
            const Index omitted = f[2];
            const auto pos = std::find(oriented.begin(), oriented.end(), omitted) - oriented.begin();
            const Index edge = *find_edge(f[0], f[1]);
            incidences_[1].push_back({static_cast<Index>(i), edge, pos % 2 == 0 ? 1 : -1});
        }
    }
    cofaces_[0].assign(static_cast<std::size_t>(vertex_count_), {});
    cofaces_[1].assign(edges_.size(), {});
    for (int d = 0; d < 2; ++d) {
        const auto& list = incidences_[static_cast<std::size_t>(d)];
        for (std::size_t k = 0; k < list.size(); ++k) {
            cofaces_[static_cast<std::size_t>(d)][static_cast<std::size_t>(list[k].face)].push_back(
                static_cast<Index>(k));
        }
    }
}

Graph skeleton(const CliqueComplex& complex)
{
    return Graph{complex.vertex_count(), complex.edges()};
}

CliqueComplex build_clique_complex(const Graph& graph)
{
    validate_graph(graph);
    CliqueComplex cx;
    cx.vertex_count_ = graph.vertex_count;
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(graph.vertex_count));
    for (const Edge& e : graph.edges) {
        const Index u = std::min(e[0], e[1]);
        const Index v = std::max(e[0], e[1]);
        cx.edges_.push_back({u, v});
        adj[static_cast<std::size_t>(u)].push_back(v);
    }
    std::sort(cx.edges_.begin(), cx.edges_.end());
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
    }
    for (Index u = 0; u < graph.vertex_count; ++u) {
        const auto& nu = adj[static_cast<std::size_t>(u)];
        for (std::size_t a = 0; a < nu.size(); ++a) {
            const auto& nv = adj[static_cast<std::size_t>(nu[a])];
            for (std::size_t b = a + 1; b < nu.size(); ++b) {
                if (std::binary_search(nv.begin(), nv.end(), nu[b])) {
                    cx.triangles_.push_back({u, nu[a], nu[b]});
                }
            }
        }
    }
    std::sort(cx.triangles_.begin(), cx.triangles_.end());
    cx.finalize();
    return cx;
}

CliqueComplex cone_complex(const CliqueComplex& base)
{
    if (base.apex_) {
        throw ValidationError("cone_complex: complex is already a cone with apex " +
                              std::to_string(*base.apex_));
    }
    CliqueComplex cx;
    const Index apex = base.vertex_count_;
    cx.vertex_count_ = apex + 1;
    cx.apex_ = apex;
    cx.edges_ = base.edges_;
    for (Index v = 0; v < apex; ++v) {
        cx.edges_.push_back({v, apex});
    }
    std::sort(cx.edges_.begin(), cx.edges_.end());
    cx.triangles_ = base.triangles_;
    for (const Edge& e : base.edges_) {
        cx.triangles_.push_back({e[0], e[1], apex});
    }
    std::sort(cx.triangles_.begin(), cx.triangles_.end());
    cx.finalize();
    return cx;
}

Index euler_characteristic(const CliqueComplex& complex)
{
    return complex.cell_count(0) - complex.cell_count(1) + complex.cell_count(2);
}

} // namespace sheafgauge
