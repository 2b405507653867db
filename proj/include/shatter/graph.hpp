#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace shatter {

/// Sorted list of distinct vertex ids, strictly increasing.
using VertexSet = std::vector<int>;

/// Finite simple undirected graph over dense ids 0..n-1. Immutable after
/// construction; adjacency lists are sorted, the edge list is sorted
/// lexicographically with u < v, and an edge's position in it is its EdgeId.
class Graph {
  public:
    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> edge_list);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<int>& neighbors(int v) const;
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int u, int v) const;
    /// Dense index of edge {u,v}; -1 if absent.
    int edge_index(int u, int v) const;
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  private:
    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
};

/// B_G(v, R): all vertices within distance R of v, v included.
VertexSet ball(const Graph& g, int v, int radius);

/// Distances from v; unreachable = -1.
std::vector<int> bfs_distances(const Graph& g, int v);

/// G^R: same vertices, u ~ v iff 0 < dist(u,v) <= R. Edges are materialized
/// eagerly; intended for desk scale.
Graph power_graph(const Graph& g, int radius);

struct InducedSubgraph {
    Graph graph;
    std::vector<int> old_of_new;  ///< new id -> original id
    std::vector<int> new_of_old;  ///< original id -> new id, -1 outside U
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& vertices);

struct LineGraph {
    Graph graph;                               ///< vertices are edge indices of the base graph
    std::vector<std::pair<int, int>> base_edges;  ///< EdgeId -> {u,v} in the base graph
};

/// L(G): vertex set E(G); e ~ e' iff they share exactly one endpoint.
LineGraph line_graph(const Graph& g);

/// Connected components as vertex sets, ordered by minimum vertex id.
std::vector<VertexSet> components(const Graph& g);

int max_degree(const Graph& g);

Graph path_graph(int n);
Graph cycle_graph(int n);
/// w*h grid, vertex id = y*w + x.
Graph grid_graph(int w, int h);
/// Pairing-model random d-regular simple graph; deterministic given seed.
Graph random_regular(int n, int d, std::uint64_t seed);
Graph disjoint_union(const std::vector<Graph>& parts);

/// True iff `s` is a strictly increasing list of ids < n.
bool valid_vertex_set(const VertexSet& s, int n);

/// Sorts and deduplicates in place.
void normalize_vertex_set(VertexSet& s);

VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& s, int v);
bool is_subset(const VertexSet& a, const VertexSet& b);

}  // namespace shatter
