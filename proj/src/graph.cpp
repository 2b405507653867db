#include "shatter/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "shatter/util.hpp"

namespace shatter {

Graph::Graph(int n, std::vector<std::pair<int, int>> edge_list) : n_(n) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    adj_.assign(n, {});
    for (auto& [u, v] : edge_list) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loop");
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
    edges_ = std::move(edge_list);
    for (const auto& [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

const std::vector<int>& Graph::neighbors(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("Graph: vertex id out of range");
    return adj_[v];
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& nb = neighbors(u);
    (void)neighbors(v);
    return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
    if (it == edges_.end() || *it != std::make_pair(u, v)) return -1;
    return static_cast<int>(it - edges_.begin());
}

std::vector<int> bfs_distances(const Graph& g, int v) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("bfs_distances: vertex out of range");
    std::vector<int> dist(g.n(), -1);
    std::queue<int> q;
    dist[v] = 0;
    q.push(v);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : g.neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

VertexSet ball(const Graph& g, int v, int radius) {
    if (radius < 0) throw std::invalid_argument("ball: negative radius");
    auto dist = bfs_distances(g, v);
    VertexSet out;
    for (int u = 0; u < g.n(); ++u)
        if (dist[u] >= 0 && dist[u] <= radius) out.push_back(u);
    return out;
}

Graph power_graph(const Graph& g, int radius) {
    if (radius < 1) throw std::invalid_argument("power_graph: radius must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < g.n(); ++v) {
        // Bounded BFS to depth `radius` from v; emit pairs with v < u only.
        std::vector<int> dist(g.n(), -1);
        std::queue<int> q;
        dist[v] = 0;
        q.push(v);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            if (dist[u] == radius) continue;
            for (int w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    if (w > v) edges.emplace_back(v, w);
                    q.push(w);
                }
            }
        }
    }
    return Graph(g.n(), std::move(edges));
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& vertices) {
    if (!valid_vertex_set(vertices, g.n()))
        throw std::invalid_argument("induced_subgraph: invalid vertex set");
    InducedSubgraph out;
    out.new_of_old.assign(g.n(), -1);
    out.old_of_new = vertices;
    for (std::size_t i = 0; i < vertices.size(); ++i) out.new_of_old[vertices[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges()) {
        int nu = out.new_of_old[u], nv = out.new_of_old[v];
        if (nu >= 0 && nv >= 0) edges.emplace_back(nu, nv);
    }
    out.graph = Graph(static_cast<int>(vertices.size()), std::move(edges));
    return out;
}

LineGraph line_graph(const Graph& g) {
    LineGraph out;
    out.base_edges = g.edges();
    std::vector<std::pair<int, int>> ledges;
    // Edges at each vertex pairwise share that endpoint.
    std::vector<std::vector<int>> at(g.n());
    for (int e = 0; e < g.m(); ++e) {
        at[g.edges()[e].first].push_back(e);
        at[g.edges()[e].second].push_back(e);
    }
    for (int v = 0; v < g.n(); ++v) {
        const auto& es = at[v];
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j)
                ledges.emplace_back(std::min(es[i], es[j]), std::max(es[i], es[j]));
    }
    out.graph = Graph(g.m(), std::move(ledges));
    return out;
}

std::vector<VertexSet> components(const Graph& g) {
    std::vector<VertexSet> out;
    std::vector<char> seen(g.n(), 0);
    for (int v = 0; v < g.n(); ++v) {
        if (seen[v]) continue;
        VertexSet comp;
        std::queue<int> q;
        seen[v] = 1;
        q.push(v);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            comp.push_back(u);
            for (int w : g.neighbors(u)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    // BFS from ascending start ids already yields min-id order.
    return out;
}

int max_degree(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.n(); ++v) d = std::max(d, g.degree(v));
    return d;
}

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: n < 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(edges));
}

Graph grid_graph(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("grid_graph: empty side");
    std::vector<std::pair<int, int>> edges;
    auto id = [w](int x, int y) { return y * w + x; };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w) edges.emplace_back(id(x, y), id(x + 1, y));
            if (y + 1 < h) edges.emplace_back(id(x, y), id(x, y + 1));
        }
    return Graph(w * h, std::move(edges));
}

Graph random_regular(int n, int d, std::uint64_t seed) {
    if (d < 0 || n < 0) throw std::invalid_argument("random_regular: negative input");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: n*d must be even");
    if (d >= n && !(d == 0 && n >= 0))
        throw std::invalid_argument("random_regular: d >= n is infeasible for a simple graph");
    Rng rng(seed);
    const int attempts = 5000;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        std::vector<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        return Graph(n, std::move(edges));
    }
    throw std::runtime_error("random_regular: no simple pairing found after " +
                             std::to_string(attempts) + " attempts");
}

Graph disjoint_union(const std::vector<Graph>& parts) {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    for (const auto& g : parts) {
        for (const auto& [u, v] : g.edges()) edges.emplace_back(u + n, v + n);
        n += g.n();
    }
    return Graph(n, std::move(edges));
}

bool valid_vertex_set(const VertexSet& s, int n) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n) return false;
        if (i > 0 && s[i] <= s[i - 1]) return false;
    }
    return true;
}

void normalize_vertex_set(VertexSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_contains(const VertexSet& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace shatter
