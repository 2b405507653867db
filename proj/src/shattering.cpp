#include "shatter/shattering.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace shatter {

void FinitePartition::validate(const VertexSet& universe) const {
    std::vector<int> seen;
    for (const auto& cls : classes) {
        if (cls.empty()) throw std::invalid_argument("FinitePartition: empty class");
        if (!valid_vertex_set(cls, cls.empty() ? 0 : cls.back() + 1))
            throw std::invalid_argument("FinitePartition: class not sorted/distinct");
        for (int v : cls) seen.push_back(v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("FinitePartition: classes overlap");
    if (seen != universe)
        throw std::invalid_argument("FinitePartition: classes do not cover the universe");
}

void FinitePartition::normalize() {
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    std::erase_if(classes, [](const VertexSet& c) { return c.empty(); });
    std::sort(classes.begin(), classes.end(),
              [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
}

FinitePartition singleton_partition(const VertexSet& universe) {
    FinitePartition out;
    out.classes.reserve(universe.size());
    for (int v : universe) out.classes.push_back({v});
    return out;
}

long shattering_width(const FinitePartition& partition, const CSP& csp) {
    partition.validate(csp.universe);
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    std::vector<int> class_of(bound, -1);
    for (std::size_t i = 0; i < partition.classes.size(); ++i)
        for (int v : partition.classes[i]) class_of[v] = static_cast<int>(i);
    long width = 0;
    std::vector<int> met;
    for (const auto& c : csp.constraints) {
        met.clear();
        for (int v : c.domain()) met.push_back(class_of[v]);
        std::sort(met.begin(), met.end());
        met.erase(std::unique(met.begin(), met.end()), met.end());
        width = std::max<long>(width, static_cast<long>(met.size()));
    }
    return width;
}

SeparationCheck verify_separation(const Graph& g, const std::vector<VertexSet>& parts,
                                  long budget) {
    std::vector<int> cover(g.n(), 0);
    for (const auto& part : parts) {
        if (!valid_vertex_set(part, g.n()))
            throw std::invalid_argument("verify_separation: invalid part");
        for (int v : part) cover[v]++;
    }
    for (int v = 0; v < g.n(); ++v)
        if (cover[v] != 1)
            throw std::invalid_argument("verify_separation: parts are not a partition of V(G)");
    SeparationCheck out;
    out.ok = true;
    for (const auto& part : parts) {
        auto sub = induced_subgraph(g, part);
        for (const auto& comp : components(sub.graph)) {
            if (static_cast<long>(comp.size()) > out.worst_size) {
                out.worst_size = static_cast<long>(comp.size());
                out.worst_component.clear();
                for (int v : comp) out.worst_component.push_back(sub.old_of_new[v]);
                std::sort(out.worst_component.begin(), out.worst_component.end());
            }
            if (static_cast<long>(comp.size()) > budget) out.ok = false;
        }
    }
    return out;
}

FinitePartition partition_from_separation(const Graph& g, const SeparationWitness& witness) {
    auto check = verify_separation(g, witness.parts, witness.budget);
    if (!check.ok)
        throw std::invalid_argument(
            "partition_from_separation: witness invalid, component of size " +
            std::to_string(check.worst_size) + " exceeds budget " +
            std::to_string(witness.budget));
    FinitePartition out;
    for (const auto& part : witness.parts) {
        auto sub = induced_subgraph(g, part);
        for (const auto& comp : components(sub.graph)) {
            VertexSet cls;
            cls.reserve(comp.size());
            for (int v : comp) cls.push_back(sub.old_of_new[v]);
            std::sort(cls.begin(), cls.end());
            out.classes.push_back(std::move(cls));
        }
    }
    out.normalize();
    return out;
}

namespace {

// Walks a path component from its lowest-id endpoint, or a cycle component
// from its lowest id toward its lower-id neighbor.
std::vector<int> trace_path_or_cycle(const Graph& g, const VertexSet& comp, bool& is_cycle) {
    for (int v : comp) {
        if (g.degree(v) > 2)
            throw std::invalid_argument("interval_separation: component is not a path or cycle");
    }
    int start = -1;
    for (int v : comp)
        if (g.degree(v) <= 1) {
            start = v;
            break;
        }
    is_cycle = (start == -1);
    if (is_cycle) start = comp.front();
    std::vector<int> order;
    order.reserve(comp.size());
    std::vector<char> visited(g.n(), 0);
    int cur = start;
    while (cur != -1) {
        order.push_back(cur);
        visited[cur] = 1;
        int next = -1;
        for (int w : g.neighbors(cur)) {
            if (!visited[w]) {
                next = w;
                break;
            }
        }
        cur = next;
    }
    if (order.size() != comp.size())
        throw std::invalid_argument("interval_separation: component traversal failed");
    return order;
}

}  // namespace

SeparationWitness interval_separation(const Graph& g, long block_length) {
    if (block_length < 2) throw std::invalid_argument("interval_separation: block length < 2");
    SeparationWitness out;
    out.budget = block_length;
    out.parts.assign(2, {});
    for (const auto& comp : components(g)) {
        bool is_cycle = false;
        auto order = trace_path_or_cycle(g, comp, is_cycle);
        long n = static_cast<long>(order.size());
        if (is_cycle) {
            if (n < 2 * block_length)
                throw std::invalid_argument("interval_separation: cycle of length " +
                                            std::to_string(n) + " is shorter than 2L");
            // Even number of near-equal blocks so the alternation closes up.
            long m = 2 * ((n + 2 * block_length - 1) / (2 * block_length));
            long base = n / m, extra = n % m;  // the first `extra` blocks get one more vertex
            long pos = 0;
            for (long b = 0; b < m; ++b) {
                long len = base + (b < extra ? 1 : 0);
                for (long i = 0; i < len; ++i) out.parts[b % 2].push_back(order[pos++]);
            }
        } else {
            long pos = 0, b = 0;
            while (pos < n) {
                long len = std::min(block_length, n - pos);
                for (long i = 0; i < len; ++i) out.parts[b % 2].push_back(order[pos++]);
                ++b;
            }
        }
    }
    for (auto& part : out.parts) std::sort(part.begin(), part.end());
    std::erase_if(out.parts, [](const VertexSet& p) { return p.empty(); });
    return out;
}

SeparationWitness grid_separation(const Graph& g, int w, int h, long tile) {
    if (tile < 2) throw std::invalid_argument("grid_separation: tile side < 2");
    if (w < 1 || h < 1 || g.n() != w * h)
        throw std::invalid_argument("grid_separation: vertex count does not match w*h");
    Graph expect = grid_graph(w, h);
    if (expect.edges() != g.edges())
        throw std::invalid_argument("grid_separation: graph is not grid(w,h)");
    SeparationWitness out;
    out.budget = tile * tile;
    out.parts.assign(3, {});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            long bx = x / tile, by = y / tile;
            out.parts[(bx + by) % 3].push_back(static_cast<int>(y) * w + x);
        }
    for (auto& part : out.parts) std::sort(part.begin(), part.end());
    std::erase_if(out.parts, [](const VertexSet& p) { return p.empty(); });
    return out;
}

}  // namespace shatter
