#include "shatter/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "shatter/util.hpp"

namespace shatter {

CSP proper_coloring_csp(const Graph& g, int q) {
    if (q < 1) throw std::invalid_argument("proper_coloring_csp: q < 1");
    CSP csp;
    csp.q = q;
    csp.universe = range_universe(g.n());
    csp.constraints.reserve(g.m());
    for (const auto& [u, v] : g.edges()) {
        std::set<std::vector<int>> diag;
        for (int c = 0; c < q; ++c) diag.insert({c, c});
        csp.constraints.push_back(Constraint::table({u, v}, q, std::move(diag)));
    }
    return csp;
}

SinklessCSP sinkless_orientation_csp(const Graph& g, std::vector<int> head_choice) {
    if (head_choice.empty()) {
        head_choice.reserve(g.m());
        for (const auto& [u, v] : g.edges()) head_choice.push_back(std::min(u, v));
    }
    if (static_cast<int>(head_choice.size()) != g.m())
        throw std::invalid_argument("sinkless_orientation_csp: head choice size mismatch");
    for (int e = 0; e < g.m(); ++e) {
        const auto& [u, v] = g.edges()[e];
        if (head_choice[e] != u && head_choice[e] != v)
            throw std::invalid_argument("sinkless_orientation_csp: head must be an endpoint");
    }
    SinklessCSP out;
    out.head_choice = head_choice;
    out.csp.q = 2;
    out.csp.universe = range_universe(g.m());
    for (int v = 0; v < g.n(); ++v) {
        if (g.degree(v) == 0)
            throw std::invalid_argument("sinkless_orientation_csp: isolated vertex " +
                                        std::to_string(v));
        std::vector<int> incident;
        for (int u : g.neighbors(v)) incident.push_back(g.edge_index(v, u));
        std::sort(incident.begin(), incident.end());
        // The single bad assignment: every incident edge oriented into v,
        // i.e. color 0 where v is the chosen head and 1 otherwise.
        std::vector<int> bad;
        bad.reserve(incident.size());
        for (int e : incident) bad.push_back(head_choice[e] == v ? 0 : 1);
        out.csp.constraints.push_back(
            Constraint::table(std::move(incident), 2, {std::move(bad)}));
    }
    return out;
}

Orientation decode_orientation(const Graph& g, const std::vector<int>& head_choice,
                               const PartialColoring& f) {
    if (f.q != 2) throw std::invalid_argument("decode_orientation: q must be 2");
    Orientation out;
    out.directed.reserve(g.m());
    for (int e = 0; e < g.m(); ++e) {
        const auto& [u, v] = g.edges()[e];
        int other = head_choice[e] == u ? v : u;
        int head = f.at(e) == 0 ? head_choice[e] : other;
        int tail = head == u ? v : u;
        out.directed.emplace_back(tail, head);
    }
    return out;
}

bool verify_sinkless(const Graph& g, const Orientation& o) {
    if (static_cast<int>(o.directed.size()) != g.m()) return false;
    std::vector<int> outdeg(g.n(), 0);
    for (const auto& [tail, head] : o.directed) ++outdeg[tail];
    for (int v = 0; v < g.n(); ++v)
        if (outdeg[v] == 0) return false;
    return true;
}

namespace {

// First k vertices in layered BFS order from the component's least vertex;
// connected by construction.
VertexSet bfs_grow(const Graph& g, const VertexSet& comp, long k) {
    VertexSet out;
    std::vector<char> seen(g.n(), 0);
    std::vector<int> layer{comp.front()};
    seen[comp.front()] = 1;
    while (!layer.empty() && static_cast<long>(out.size()) < k) {
        for (int v : layer) {
            out.push_back(v);
            if (static_cast<long>(out.size()) == k) break;
        }
        if (static_cast<long>(out.size()) == k) break;
        std::vector<int> next;
        for (int v : layer)
            for (int w : g.neighbors(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    next.push_back(w);
                }
        std::sort(next.begin(), next.end());
        layer = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SectionResult independent_complete_section(const Graph& g1, const Graph& g2, long k, int delta,
                                           const SectionOptions& opts) {
    if (g1.n() != g2.n())
        throw std::invalid_argument("independent_complete_section: vertex sets differ");
    if (delta < 2) throw std::invalid_argument("independent_complete_section: delta must be >= 2");
    if (max_degree(g1) > delta)
        throw std::invalid_argument("independent_complete_section: delta below max degree of g1");
    if (k < 1) throw std::invalid_argument("independent_complete_section: k < 1");
    SectionResult result;
    auto comps = components(g2);
    for (const auto& comp : comps) {
        if (static_cast<long>(comp.size()) < k)
            throw std::invalid_argument("independent_complete_section: g2 component of size " +
                                        std::to_string(comp.size()) + " below k");
        result.selected.push_back(bfs_grow(g2, comp, k));
    }

    // Delete g1-edges inside each selected subset.
    std::vector<int> subset_of(g1.n(), -1);
    for (std::size_t i = 0; i < result.selected.size(); ++i)
        for (int v : result.selected[i]) subset_of[v] = static_cast<int>(i);
    std::vector<std::pair<int, int>> kept;
    for (const auto& [u, v] : g1.edges())
        if (subset_of[u] < 0 || subset_of[u] != subset_of[v]) kept.emplace_back(u, v);
    Graph reduced(g1.n(), std::move(kept));

    CSP csp;
    csp.q = delta;
    csp.universe = range_universe(g1.n());
    for (const auto& f_set : result.selected) {
        VertexSet domain = f_set;
        for (int v : f_set)
            for (int u : reduced.neighbors(v)) domain.push_back(u);
        normalize_vertex_set(domain);
        std::vector<int> pos_in_domain(g1.n(), -1);
        for (std::size_t i = 0; i < domain.size(); ++i) pos_in_domain[domain[i]] = static_cast<int>(i);
        // Neighbor positions per member of F, captured for the predicate.
        std::vector<int> members;
        std::vector<std::vector<int>> nbr_pos;
        for (int v : f_set) {
            members.push_back(pos_in_domain[v]);
            std::vector<int> nbrs;
            for (int u : reduced.neighbors(v)) nbrs.push_back(pos_in_domain[u]);
            nbr_pos.push_back(std::move(nbrs));
        }
        auto pred = [members, nbr_pos](std::span<const int> phi) {
            // Violated iff no member lands in the extracted set S_phi.
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (phi[members[i]] != 0) continue;
                bool all_nonzero = true;
                for (int p : nbr_pos[i])
                    if (phi[p] == 0) {
                        all_nonzero = false;
                        break;
                    }
                if (all_nonzero) return false;
            }
            return true;
        };
        csp.constraints.push_back(Constraint::lazy(std::move(domain), delta, pred));
    }

    std::optional<PartialColoring> f;
    if (opts.solver == SectionOptions::Solver::Brute) {
        BruteForceOptions bf;
        bf.component_budget = opts.brute_budget;
        f = brute_force_solve(csp, bf);
        if (!f) {
            result.diagnostics = "brute force: neighborhood CSP unsatisfiable";
            return result;
        }
    } else {
        auto mt = moser_tardos(csp, opts.seed, opts.max_resamples);
        if (!mt.solution) {
            result.diagnostics = "moser-tardos failed: " + mt.diagnostics;
            return result;
        }
        f = std::move(mt.solution);
    }

    // Extract S_f and shrink to one vertex per subset.
    VertexSet section;
    for (const auto& f_set : result.selected) {
        int pick = -1;
        for (int v : f_set) {
            if (f->at(v) != 0) continue;
            bool all_nonzero = true;
            for (int u : reduced.neighbors(v))
                if (f->at(u) == 0) {
                    all_nonzero = false;
                    break;
                }
            if (all_nonzero) {
                pick = v;
                break;
            }
        }
        if (pick < 0) {
            result.diagnostics = "solver output does not meet a selected subset (bug)";
            throw std::logic_error(result.diagnostics);
        }
        section.push_back(pick);
    }
    std::sort(section.begin(), section.end());

    // Output contract: independent in the reduced graph and in the original.
    for (int v : section) {
        for (int u : reduced.neighbors(v))
            if (set_contains(section, u))
                throw std::logic_error("independent_complete_section: section not independent (bug)");
        for (int u : g1.neighbors(v))
            if (set_contains(section, u))
                throw std::logic_error(
                    "independent_complete_section: section not g1-independent (bug)");
    }
    result.section = std::move(section);
    return result;
}

FStarStats estimate_F_star(const Graph& g, const VertexSet& f_set, int delta, long trials,
                           std::uint64_t seed, long enum_cap) {
    if (delta < 2) throw std::invalid_argument("estimate_F_star: delta must be >= 2");
    if (!valid_vertex_set(f_set, g.n()) || f_set.empty())
        throw std::invalid_argument("estimate_F_star: invalid F");
    for (int v : f_set) {
        if (g.degree(v) > delta)
            throw std::invalid_argument("estimate_F_star: vertex degree above delta");
        for (int u : g.neighbors(v))
            if (set_contains(f_set, u))
                throw std::invalid_argument("estimate_F_star: F is not independent");
    }
    VertexSet nbhd;
    for (int v : f_set)
        for (int u : g.neighbors(v)) nbhd.push_back(u);
    normalize_vertex_set(nbhd);
    std::vector<int> pos(g.n(), -1);
    for (std::size_t i = 0; i < nbhd.size(); ++i) pos[nbhd[i]] = static_cast<int>(i);

    auto f_star_size = [&](const std::vector<int>& psi) {
        long size = 0;
        for (int v : f_set) {
            bool in = true;
            for (int u : g.neighbors(v))
                if (psi[pos[u]] == 0) {
                    in = false;
                    break;
                }
            if (in) ++size;
        }
        return size;
    };

    FStarStats stats;
    stats.trials = trials;
    Rng rng(seed);
    std::vector<int> psi(nbhd.size());
    double sum = 0, sumsq = 0;
    long below = 0;
    stats.min = static_cast<long>(f_set.size());
    double k8 = static_cast<double>(f_set.size()) / 8.0;
    for (long t = 0; t < trials; ++t) {
        for (auto& x : psi) x = rng.below_int(delta);
        long size = f_star_size(psi);
        sum += static_cast<double>(size);
        sumsq += static_cast<double>(size) * static_cast<double>(size);
        stats.min = std::min(stats.min, size);
        if (static_cast<double>(size) < k8) ++below;
    }
    stats.mean = sum / static_cast<double>(trials);
    stats.p_below_k8 = static_cast<double>(below) / static_cast<double>(trials);
    if (trials > 1)
        stats.sample_std = std::sqrt(std::max(
            0.0, (sumsq - sum * sum / static_cast<double>(trials)) / static_cast<double>(trials - 1)));

    double total = 1;
    bool enumerable = true;
    for (std::size_t i = 0; i < nbhd.size(); ++i) {
        total *= delta;
        if (total > static_cast<double>(enum_cap)) {
            enumerable = false;
            break;
        }
    }
    if (enumerable) {
        stats.exact = true;
        mpz_class denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(delta), nbhd.size());
        std::map<long, mpz_class> counts;
        std::fill(psi.begin(), psi.end(), 0);
        for (;;) {
            ++counts[f_star_size(psi)];
            std::size_t i = psi.size();
            while (i > 0) {
                if (++psi[i - 1] < delta) break;
                psi[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
        for (const auto& [size, count] : counts) {
            Rat p(count);
            p /= Rat(denom);
            p.canonicalize();
            stats.exact_distribution[size] = p;
        }
    }
    return stats;
}

std::map<int, int> union_coloring(const Graph& g, const std::vector<ColoredPart>& parts,
                                  int* palette_out) {
    std::vector<int> cover(g.n(), 0);
    for (const auto& part : parts) {
        if (!valid_vertex_set(part.part, g.n()))
            throw std::invalid_argument("union_coloring: invalid part");
        for (int v : part.part) ++cover[v];
    }
    for (int v = 0; v < g.n(); ++v)
        if (cover[v] != 1)
            throw std::invalid_argument("union_coloring: parts do not partition V(G)");
    std::map<int, int> merged;
    int offset = 0;
    for (const auto& part : parts) {
        int palette = 0;
        for (int v : part.part) {
            auto it = part.coloring.find(v);
            if (it == part.coloring.end())
                throw std::invalid_argument("union_coloring: part member uncolored");
            if (it->second < 0) throw std::invalid_argument("union_coloring: negative color");
            palette = std::max(palette, it->second + 1);
        }
        for (int v : part.part) {
            for (int u : g.neighbors(v)) {
                if (u > v && set_contains(part.part, u) &&
                    part.coloring.at(u) == part.coloring.at(v))
                    throw std::invalid_argument("union_coloring: part coloring not proper");
            }
            merged[v] = part.coloring.at(v) + offset;
        }
        offset += palette;
    }
    if (palette_out) *palette_out = offset;
    return merged;
}

std::map<int, int> section_coloring(const Graph& g, const std::vector<VertexSet>& parts,
                                    const VertexSet& section, int* palette_out) {
    std::vector<int> cover(g.n(), 0);
    for (const auto& part : parts) {
        if (!valid_vertex_set(part, g.n()))
            throw std::invalid_argument("section_coloring: invalid part");
        for (int v : part) ++cover[v];
    }
    for (int v = 0; v < g.n(); ++v)
        if (cover[v] != 1)
            throw std::invalid_argument("section_coloring: parts do not partition V(G)");
    if (!valid_vertex_set(section, g.n()))
        throw std::invalid_argument("section_coloring: invalid section");
    for (int v : section)
        for (int u : g.neighbors(v))
            if (set_contains(section, u))
                throw std::invalid_argument("section_coloring: section not independent");

    std::map<int, int> out;
    for (int v : section) out[v] = 0;
    int offset = 1;
    int total_delta = 0;
    for (const auto& part : parts) {
        auto sub_full = induced_subgraph(g, part);
        int delta_part = max_degree(sub_full.graph);
        total_delta += delta_part;
        // Every component of g[part] must meet the section.
        for (const auto& comp : components(sub_full.graph)) {
            bool met = false;
            for (int v : comp)
                if (set_contains(section, sub_full.old_of_new[v])) {
                    met = true;
                    break;
                }
            if (!met)
                throw std::invalid_argument(
                    "section_coloring: section misses a component of a part");
        }
        VertexSet rest = set_difference(part, section);
        if (rest.empty()) {
            offset += delta_part;
            continue;
        }
        auto sub = induced_subgraph(g, rest);
        for (const auto& comp : components(sub.graph)) {
            // Reverse-BFS greedy from a vertex that lost a neighbor to the
            // section, i.e. has degree below the part's maximum.
            int start = -1;
            for (int v : comp)
                if (sub.graph.degree(v) <= delta_part - 1) {
                    start = v;
                    break;
                }
            if (start < 0)
                throw std::logic_error("section_coloring: no degree-deficient vertex (bug)");
            std::vector<int> order;
            std::vector<char> seen(sub.graph.n(), 0);
            std::queue<int> queue;
            queue.push(start);
            seen[start] = 1;
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop();
                order.push_back(v);
                for (int w : sub.graph.neighbors(v))
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push(w);
                    }
            }
            std::vector<int> color(sub.graph.n(), -1);
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                std::vector<char> taken(delta_part, 0);
                for (int w : sub.graph.neighbors(*it))
                    if (color[w] >= 0) taken[color[w]] = 1;
                int c = 0;
                while (c < delta_part && taken[c]) ++c;
                if (c >= delta_part)
                    throw std::logic_error("section_coloring: palette exceeded (bug)");
                color[*it] = c;
            }
            for (int v : comp) out[sub.old_of_new[v]] = color[v] + offset;
        }
        offset += delta_part;
    }
    if (palette_out) *palette_out = 1 + total_delta;
    return out;
}

int generator_order(const SchreierAction::Generator& gen) {
    std::vector<char> seen(gen.perm.size(), 0);
    int order = -1;
    for (std::size_t x = 0; x < gen.perm.size(); ++x) {
        if (seen[x]) continue;
        int len = 0;
        std::size_t y = x;
        while (!seen[y]) {
            seen[y] = 1;
            y = static_cast<std::size_t>(gen.perm[y]);
            ++len;
        }
        if (order < 0)
            order = len;
        else if (order != len)
            throw std::invalid_argument("generator " + gen.name +
                                        ": cycles of unequal length (freeness surrogate fails)");
    }
    return order;
}

void validate_action(const SchreierAction& action) {
    if (action.points < 1) throw std::invalid_argument("SchreierAction: no points");
    if (action.generators.empty()) throw std::invalid_argument("SchreierAction: no generators");
    std::map<std::string, int> index_of;
    for (std::size_t i = 0; i < action.generators.size(); ++i) {
        const auto& gen = action.generators[i];
        if (index_of.count(gen.name))
            throw std::invalid_argument("SchreierAction: duplicate generator name " + gen.name);
        index_of[gen.name] = static_cast<int>(i);
        if (static_cast<int>(gen.perm.size()) != action.points)
            throw std::invalid_argument("generator " + gen.name + ": wrong permutation size");
        std::vector<char> seen(action.points, 0);
        bool identity = true;
        for (int x = 0; x < action.points; ++x) {
            int y = gen.perm[x];
            if (y < 0 || y >= action.points || seen[y])
                throw std::invalid_argument("generator " + gen.name + ": not a permutation");
            seen[y] = 1;
            if (y != x) identity = false;
        }
        if (identity)
            throw std::invalid_argument("generator " + gen.name + ": identity not allowed");
    }
    for (const auto& gen : action.generators) {
        auto it = index_of.find(gen.inverse);
        if (it == index_of.end())
            throw std::invalid_argument("generator " + gen.name + ": inverse partner missing");
        const auto& partner = action.generators[it->second];
        for (int x = 0; x < action.points; ++x)
            if (partner.perm[gen.perm[x]] != x)
                throw std::invalid_argument("generator " + gen.name +
                                            ": declared inverse is not the inverse permutation");
        if (partner.inverse != gen.name)
            throw std::invalid_argument("generator " + gen.name + ": inverse pairing asymmetric");
        if (partner.treat_as_long != gen.treat_as_long)
            throw std::invalid_argument("generator " + gen.name +
                                        ": treat_as_long must match its inverse");
        int order = generator_order(gen);
        if (order == 2 && gen.inverse != gen.name)
            throw std::invalid_argument("generator " + gen.name +
                                        ": order 2 must be its own inverse");
        if (order > 2 && gen.inverse == gen.name)
            throw std::invalid_argument("generator " + gen.name +
                                        ": order > 2 cannot be self-inverse");
        if (gen.treat_as_long && order == 2)
            throw std::invalid_argument("generator " + gen.name +
                                        ": treat_as_long requires order > 2");
    }
}

GeneratorClassification classify(const SchreierAction& action) {
    validate_action(action);
    GeneratorClassification out;
    std::map<std::string, int> index_of;
    for (std::size_t i = 0; i < action.generators.size(); ++i)
        index_of[action.generators[i].name] = static_cast<int>(i);
    std::vector<char> taken(action.generators.size(), 0);
    for (std::size_t i = 0; i < action.generators.size(); ++i) {
        if (taken[i]) continue;
        const auto& gen = action.generators[i];
        int order = generator_order(gen);
        if (order == 2) {
            taken[i] = 1;
            out.f2.push_back(static_cast<int>(i));
            out.f_size += 1;
            continue;
        }
        int partner = index_of[gen.inverse];
        taken[i] = 1;
        taken[partner] = 1;
        int rep = std::min<int>(static_cast<int>(i), partner);
        if (gen.treat_as_long)
            out.f_long.push_back(rep);
        else if (order % 2 == 0)
            out.f_even.push_back(rep);
        else
            out.f_odd.push_back(rep);
        out.f_size += 2;
    }
    return out;
}

SchreierGraphResult schreier_graph(const SchreierAction& action) {
    validate_action(action);
    auto cls = classify(action);
    std::vector<int> reps = cls.f2;
    reps.insert(reps.end(), cls.f_even.begin(), cls.f_even.end());
    reps.insert(reps.end(), cls.f_odd.begin(), cls.f_odd.end());
    reps.insert(reps.end(), cls.f_long.begin(), cls.f_long.end());
    std::sort(reps.begin(), reps.end());
    std::map<std::pair<int, int>, int> gen_of_edge;
    for (int rep : reps) {
        const auto& perm = action.generators[rep].perm;
        for (int x = 0; x < action.points; ++x) {
            int y = perm[x];
            auto key = std::minmax(x, y);
            auto [it, fresh] = gen_of_edge.emplace(std::make_pair(key.first, key.second), rep);
            if (!fresh && it->second != rep)
                throw std::invalid_argument(
                    "schreier_graph: edge sets E_sigma overlap between generators " +
                    action.generators[it->second].name + " and " + action.generators[rep].name);
        }
    }
    SchreierGraphResult out;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(gen_of_edge.size());
    for (const auto& [edge, rep] : gen_of_edge) edges.push_back(edge);
    out.graph = Graph(action.points, std::move(edges));
    out.edge_generator.reserve(out.graph.m());
    for (const auto& edge : out.graph.edges()) out.edge_generator.push_back(gen_of_edge[edge]);
    for (const auto& gen : action.generators) out.generator_names.push_back(gen.name);
    return out;
}

namespace {

// One line-graph vertex per cycle, pairwise nonadjacent in the ambient
// induced graph. Greedy in cycle order with backtracking over candidates.
std::optional<std::vector<int>> choose_cycle_section(
    const Graph& ambient, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> chosen;
    std::vector<char> blocked(ambient.n(), 0);
    std::function<bool(std::size_t)> place = [&](std::size_t i) {
        if (i == cycles.size()) return true;
        for (int v : cycles[i]) {
            if (blocked[v]) continue;
            bool clash = false;
            for (int u : ambient.neighbors(v))
                if (blocked[u] && std::find(chosen.begin(), chosen.end(), u) != chosen.end()) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            chosen.push_back(v);
            blocked[v] = 1;
            if (place(i + 1)) return true;
            blocked[v] = 0;
            chosen.pop_back();
        }
        return false;
    };
    if (!place(0)) return std::nullopt;
    return chosen;
}

}  // namespace

EdgeColoringResult schreier_edge_coloring(const SchreierAction& action,
                                          const SchreierColoringOptions& opts) {
    auto cls = classify(action);
    if (cls.f_size < 2)
        throw std::invalid_argument("schreier_edge_coloring: |F| must be >= 2");
    auto sch = schreier_graph(action);
    auto lg = line_graph(sch.graph);
    const Graph& line = lg.graph;

    std::vector<ColoredPart> final_parts;

    // F2 and even orders: each E_sigma colored on its own (1 or 2 colors).
    for (int rep : cls.f2) {
        ColoredPart part;
        for (int e = 0; e < sch.graph.m(); ++e)
            if (sch.edge_generator[e] == rep) part.part.push_back(e);
        auto sub = induced_subgraph(line, part.part);
        if (sub.graph.m() != 0)
            throw std::logic_error("schreier_edge_coloring: matching part not independent (bug)");
        for (int e : part.part) part.coloring[e] = 0;
        final_parts.push_back(std::move(part));
    }
    for (int rep : cls.f_even) {
        ColoredPart part;
        for (int e = 0; e < sch.graph.m(); ++e)
            if (sch.edge_generator[e] == rep) part.part.push_back(e);
        auto sub = induced_subgraph(line, part.part);
        int order = generator_order(action.generators[rep]);
        for (const auto& comp : components(sub.graph)) {
            if (static_cast<int>(comp.size()) != order)
                throw std::logic_error("schreier_edge_coloring: cycle length mismatch (bug)");
            // Even cycles 2-color by BFS parity.
            auto dist = bfs_distances(sub.graph, comp.front());
            for (int v : comp) part.coloring[sub.old_of_new[v]] = dist[v] % 2;
        }
        final_parts.push_back(std::move(part));
    }

    // Odd and treat-as-long generators: complete section + two colors each.
    std::vector<int> long_group = cls.f_odd;
    long_group.insert(long_group.end(), cls.f_long.begin(), cls.f_long.end());
    std::sort(long_group.begin(), long_group.end());
    if (!long_group.empty()) {
        VertexSet group_edges;
        for (int e = 0; e < sch.graph.m(); ++e)
            if (std::find(long_group.begin(), long_group.end(), sch.edge_generator[e]) !=
                long_group.end())
                group_edges.push_back(e);
        auto sub = induced_subgraph(line, group_edges);
        std::vector<VertexSet> parts_local;
        std::vector<std::vector<int>> cycles;
        for (int rep : long_group) {
            VertexSet part_local;
            for (std::size_t i = 0; i < group_edges.size(); ++i)
                if (sch.edge_generator[group_edges[i]] == rep)
                    part_local.push_back(static_cast<int>(i));
            auto part_sub = induced_subgraph(sub.graph, part_local);
            int order = generator_order(action.generators[rep]);
            for (const auto& comp : components(part_sub.graph)) {
                if (static_cast<int>(comp.size()) != order)
                    throw std::logic_error("schreier_edge_coloring: cycle length mismatch (bug)");
                std::vector<int> cycle;
                for (int v : comp) cycle.push_back(part_sub.old_of_new[v]);
                std::sort(cycle.begin(), cycle.end());
                cycles.push_back(std::move(cycle));
            }
            parts_local.push_back(std::move(part_local));
        }
        std::sort(cycles.begin(), cycles.end());

        std::optional<std::vector<int>> section_local;
        if (opts.sections_via_lll) {
            // Demonstration route through the LLL machinery; may fail at
            // desk-scale cycle lengths.
            std::vector<std::pair<int, int>> cycle_edges;
            for (const auto& cycle : cycles) {
                auto csub = induced_subgraph(sub.graph, cycle);
                for (const auto& [a, b] : csub.graph.edges())
                    cycle_edges.emplace_back(csub.old_of_new[a], csub.old_of_new[b]);
            }
            Graph cycles_graph(sub.graph.n(), std::move(cycle_edges));
            long k = action.points;
            for (const auto& cycle : cycles)
                k = std::min<long>(k, static_cast<long>(cycle.size()));
            SectionOptions sopts;
            sopts.seed = opts.seed;
            auto res = independent_complete_section(
                sub.graph, cycles_graph, k, std::max(2, max_degree(sub.graph)), sopts);
            if (!res.section)
                throw std::runtime_error("schreier_edge_coloring: LLL section failed: " +
                                         res.diagnostics);
            section_local = std::vector<int>(res.section->begin(), res.section->end());
        } else {
            section_local = choose_cycle_section(sub.graph, cycles);
            if (!section_local)
                throw std::runtime_error(
                    "schreier_edge_coloring: no independent cycle section found");
        }
        VertexSet section_sorted(section_local->begin(), section_local->end());
        std::sort(section_sorted.begin(), section_sorted.end());
        int palette = 0;
        auto colored = section_coloring(sub.graph, parts_local, section_sorted, &palette);
        ColoredPart group_part;
        group_part.part = group_edges;
        for (const auto& [local, color] : colored)
            group_part.coloring[sub.old_of_new[local]] = color;
        final_parts.push_back(std::move(group_part));
    }

    int palette = 0;
    auto merged = union_coloring(line, final_parts, &palette);
    EdgeColoringResult out;
    out.palette = palette;
    out.colors.resize(sch.graph.m());
    for (int e = 0; e < sch.graph.m(); ++e) out.colors[e] = merged.at(e);
    auto check = verify_edge_coloring(sch.graph, out.colors);
    if (!check.ok)
        throw std::logic_error("schreier_edge_coloring: output not proper (bug)");
    if (out.palette > cls.f_size + 1)
        throw std::logic_error("schreier_edge_coloring: palette exceeds |F|+1 (bug)");
    return out;
}

EdgeColoringCheck verify_edge_coloring(const Graph& g, const std::vector<int>& colors) {
    if (static_cast<int>(colors.size()) != g.m())
        throw std::invalid_argument("verify_edge_coloring: size mismatch");
    EdgeColoringCheck out;
    std::vector<std::vector<int>> at(g.n());
    for (int e = 0; e < g.m(); ++e) {
        at[g.edges()[e].first].push_back(e);
        at[g.edges()[e].second].push_back(e);
    }
    for (int v = 0; v < g.n(); ++v) {
        for (std::size_t i = 0; i < at[v].size(); ++i)
            for (std::size_t j = i + 1; j < at[v].size(); ++j)
                if (colors[at[v][i]] == colors[at[v][j]]) {
                    out.ok = false;
                    out.conflicts.emplace_back(at[v][i], at[v][j]);
                }
    }
    return out;
}

}  // namespace shatter
