#include "shatter/local.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shatter/util.hpp"

namespace shatter {

int StructuredGraph::max_arity() const {
    std::size_t best = 0;
    for (const auto& [tuple, value] : sigma) best = std::max(best, tuple.size());
    return static_cast<int>(best);
}

void StructuredGraph::validate() const {
    for (const auto& [tuple, value] : sigma) {
        if (value < 0) throw std::invalid_argument("StructuredGraph: negative sigma value");
        for (int v : tuple)
            if (v < 0 || v >= g.n())
                throw std::invalid_argument("StructuredGraph: sigma tuple entry out of range");
    }
}

StructuredGraph plain(const Graph& g) { return StructuredGraph{g, {}}; }

RootedBall extract_ball(const StructuredGraph& sg, const Labeling& labels, int v, int radius) {
    if (radius < 0) throw std::invalid_argument("extract_ball: negative radius");
    if (v < 0 || v >= sg.g.n()) throw std::invalid_argument("extract_ball: root out of range");
    if (static_cast<int>(labels.size()) != sg.g.n())
        throw std::invalid_argument("extract_ball: labeling size mismatch");
    // Layered BFS; each layer sorted by original id.
    std::vector<int> order{v};
    std::vector<char> seen(sg.g.n(), 0);
    seen[v] = 1;
    std::vector<int> layer{v};
    for (int depth = 0; depth < radius && !layer.empty(); ++depth) {
        std::vector<int> next;
        for (int u : layer)
            for (int w : sg.g.neighbors(u))
                if (!seen[w]) {
                    seen[w] = 1;
                    next.push_back(w);
                }
        std::sort(next.begin(), next.end());
        order.insert(order.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    std::vector<int> new_of_old(sg.g.n(), -1);
    for (std::size_t i = 0; i < order.size(); ++i) new_of_old[order[i]] = static_cast<int>(i);
    RootedBall ball;
    ball.radius = radius;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [a, b] : sg.g.edges())
        if (new_of_old[a] >= 0 && new_of_old[b] >= 0)
            edges.emplace_back(new_of_old[a], new_of_old[b]);
    ball.sg.g = Graph(static_cast<int>(order.size()), std::move(edges));
    ball.labels.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) ball.labels[i] = labels[order[i]];
    for (const auto& [tuple, value] : sg.sigma) {
        std::vector<int> mapped(tuple.size());
        bool inside = true;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (new_of_old[tuple[i]] < 0) {
                inside = false;
                break;
            }
            mapped[i] = new_of_old[tuple[i]];
        }
        if (inside) ball.sg.sigma.emplace(std::move(mapped), value);
    }
    return ball;
}

Labeling run_local(const LocalAlgorithm& alg, const StructuredGraph& sg, const Labeling& labels,
                   int rounds, unsigned threads) {
    if (static_cast<int>(labels.size()) != sg.g.n())
        throw std::invalid_argument("run_local: labeling size mismatch");
    Labeling out(sg.g.n());
    parallel_for(
        static_cast<std::size_t>(sg.g.n()),
        [&](std::size_t v) {
            out[v] = alg.out(extract_ball(sg, labels, static_cast<int>(v), rounds));
        },
        threads);
    return out;
}

LCLCheck check_lcl(const LCLProblem& problem, const StructuredGraph& sg, const Labeling& labels) {
    LCLCheck out;
    for (int v = 0; v < sg.g.n(); ++v) {
        if (!problem.accept(extract_ball(sg, labels, v, problem.radius))) {
            out.ok = false;
            out.violations.push_back(v);
        }
    }
    return out;
}

Labeling run_deterministic(const LocalAlgorithm& alg, const StructuredGraph& sg,
                           const std::vector<int>& id, int rounds) {
    if (static_cast<int>(id.size()) != sg.g.n())
        throw std::invalid_argument("run_deterministic: ID size mismatch");
    std::vector<char> seen(sg.g.n(), 0);
    for (int x : id) {
        if (x < 0 || x >= sg.g.n() || seen[x])
            throw std::invalid_argument("run_deterministic: ID is not a bijection onto 0..n-1");
        seen[x] = 1;
    }
    Labeling labels(id.begin(), id.end());
    return run_local(alg, sg, labels, rounds);
}

RandomizedRunReport run_randomized(const LocalAlgorithm& alg, const LCLProblem& problem,
                                   const StructuredGraph& sg, long ell, int rounds, long trials,
                                   std::uint64_t seed) {
    if (ell < 1) throw std::invalid_argument("run_randomized: ell must be >= 1");
    if (trials < 1) throw std::invalid_argument("run_randomized: trials must be >= 1");
    RandomizedRunReport rep;
    rep.trials = trials;
    for (long t = 0; t < trials; ++t) {
        Rng rng(child_seed(seed, "trial", static_cast<std::uint64_t>(t)));
        Labeling theta(sg.g.n());
        for (auto& x : theta) x = static_cast<long>(rng.below(static_cast<std::uint64_t>(ell)));
        Labeling out = run_local(alg, sg, theta, rounds);
        if (check_lcl(problem, sg, out).ok) ++rep.successes;
    }
    rep.rate = static_cast<double>(rep.successes) / static_cast<double>(trials);
    const double z = 1.959963984540054;  // two-sided 95%
    double n = static_cast<double>(trials), p = rep.rate;
    double denom = 1.0 + z * z / n;
    double center = (p + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    rep.ci_low = std::max(0.0, center - half);
    rep.ci_high = std::min(1.0, center + half);
    rep.meets_one_minus_one_over_n =
        sg.g.n() > 0 && rep.rate >= 1.0 - 1.0 / static_cast<double>(sg.g.n());
    return rep;
}

Rat exact_success_rate(const LocalAlgorithm& alg, const LCLProblem& problem,
                       const StructuredGraph& sg, long ell, int rounds, long enum_cap) {
    if (ell < 1) throw std::invalid_argument("exact_success_rate: ell must be >= 1");
    double total = 1;
    for (int i = 0; i < sg.g.n(); ++i) {
        total *= static_cast<double>(ell);
        if (total > static_cast<double>(enum_cap))
            throw budget_error("exact_success_rate: ell^n exceeds enumeration cap");
    }
    Labeling theta(sg.g.n(), 0);
    mpz_class successes = 0, count = 0;
    for (;;) {
        ++count;
        Labeling out = run_local(alg, sg, theta, rounds, 1);
        if (check_lcl(problem, sg, out).ok) ++successes;
        std::size_t i = theta.size();
        while (i > 0) {
            if (++theta[i - 1] < ell) break;
            theta[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    Rat rate(successes);
    rate /= Rat(count);
    rate.canonicalize();
    return rate;
}

namespace {

void put_u64(std::string& out, std::uint64_t x) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& s, std::size_t& pos) {
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | static_cast<unsigned char>(s.at(pos++));
    return x;
}

// Fixed-width encoding of one placement: adjacency bits to the already
// placed vertices, then the label. Same width for every candidate at a given
// position, so lexicographic comparison of prefixes is position-aligned.
std::string row_encoding(const std::vector<std::vector<char>>& adj, const Labeling& labels,
                         const std::vector<int>& order, int candidate) {
    std::string row;
    std::size_t placed = order.size();
    row.resize((placed + 7) / 8, '\0');
    for (std::size_t j = 0; j < placed; ++j)
        if (adj[candidate][order[j]]) row[j / 8] |= static_cast<char>(0x80 >> (j % 8));
    put_u64(row, static_cast<std::uint64_t>(labels[candidate]));
    return row;
}

std::string sigma_block(const StructuredGraph& sg, const std::vector<int>& new_of_old) {
    std::vector<std::string> entries;
    for (const auto& [tuple, value] : sg.sigma) {
        std::string e;
        e.push_back(static_cast<char>(tuple.size()));
        for (int v : tuple) e.push_back(static_cast<char>(new_of_old[v]));
        put_u64(e, static_cast<std::uint64_t>(value));
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end());
    std::string out;
    put_u64(out, entries.size());
    for (const auto& e : entries) out += e;
    return out;
}

struct CanonicalSearch {
    const RootedBall& ball;
    int n;
    std::vector<std::vector<char>> adj;
    std::string best;
    bool have_best = false;

    explicit CanonicalSearch(const RootedBall& b) : ball(b), n(b.sg.g.n()) {
        adj.assign(n, std::vector<char>(n, 0));
        for (const auto& [u, v] : b.sg.g.edges()) adj[u][v] = adj[v][u] = 1;
    }

    // Transpositions that fix the rest of the structure lead to identical
    // encodings; keeping one representative prunes symmetric fan-out.
    bool twins(int u, int w) const {
        if (ball.labels[u] != ball.labels[w]) return false;
        for (int x = 0; x < n; ++x) {
            if (x == u || x == w) continue;
            if (adj[u][x] != adj[w][x]) return false;
        }
        for (const auto& [tuple, value] : ball.sg.sigma) {
            std::vector<int> swapped(tuple);
            bool moved = false;
            for (auto& t : swapped) {
                if (t == u) {
                    t = w;
                    moved = true;
                } else if (t == w) {
                    t = u;
                    moved = true;
                }
            }
            if (!moved) continue;
            auto it = ball.sg.sigma.find(swapped);
            if (it == ball.sg.sigma.end() || it->second != value) return false;
        }
        return true;
    }

    void dfs(std::vector<int>& order, std::vector<char>& used, const std::string& prefix) {
        if (have_best) {
            std::size_t len = std::min(prefix.size(), best.size());
            if (prefix.compare(0, len, best, 0, len) > 0) return;
        }
        if (static_cast<int>(order.size()) == n) {
            std::vector<int> new_of_old(n);
            for (int i = 0; i < n; ++i) new_of_old[order[i]] = i;
            std::string full = prefix + sigma_block(ball.sg, new_of_old);
            if (!have_best || full < best) {
                best = std::move(full);
                have_best = true;
            }
            return;
        }
        std::string min_row;
        std::vector<int> cands;
        for (int u = 0; u < n; ++u) {
            if (used[u]) continue;
            std::string row = row_encoding(adj, ball.labels, order, u);
            if (cands.empty() || row < min_row) {
                min_row = std::move(row);
                cands.clear();
                cands.push_back(u);
            } else if (row == min_row) {
                cands.push_back(u);
            }
        }
        std::vector<int> reps;
        for (int u : cands) {
            bool dup = false;
            for (int w : reps)
                if (twins(w, u)) {
                    dup = true;
                    break;
                }
            if (!dup) reps.push_back(u);
        }
        for (int u : reps) {
            order.push_back(u);
            used[u] = 1;
            dfs(order, used, prefix + min_row);
            used[u] = 0;
            order.pop_back();
        }
    }
};

}  // namespace

std::string canonical_form(const RootedBall& ball, int cap) {
    int n = ball.sg.g.n();
    if (n < 1) throw std::invalid_argument("canonical_form: empty ball");
    if (n > cap)
        throw budget_error("canonical_form: ball of " + std::to_string(n) +
                           " vertices exceeds cap " + std::to_string(cap));
    if (n > 255 || ball.radius > 255)
        throw std::invalid_argument("canonical_form: encoding limits exceeded");
    for (long lab : ball.labels)
        if (lab < 0) throw std::invalid_argument("canonical_form: negative label");
    CanonicalSearch search(ball);
    std::string header;
    header.push_back(static_cast<char>(n));
    header.push_back(static_cast<char>(ball.radius));
    put_u64(header, static_cast<std::uint64_t>(ball.labels[0]));
    std::vector<int> order{0};
    std::vector<char> used(n, 0);
    used[0] = 1;
    search.dfs(order, used, header);
    return search.best;
}

RootedBall ball_from_canonical(const std::string& encoded) {
    std::size_t pos = 0;
    int n = static_cast<unsigned char>(encoded.at(pos++));
    int radius = static_cast<unsigned char>(encoded.at(pos++));
    Labeling labels(n);
    labels[0] = static_cast<long>(get_u64(encoded, pos));
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) {
        std::size_t bytes = (static_cast<std::size_t>(i) + 7) / 8;
        for (int j = 0; j < i; ++j) {
            unsigned char block = static_cast<unsigned char>(encoded.at(pos + j / 8));
            if (block & (0x80 >> (j % 8))) edges.emplace_back(j, i);
        }
        pos += bytes;
        labels[i] = static_cast<long>(get_u64(encoded, pos));
    }
    RootedBall ball;
    ball.radius = radius;
    ball.sg.g = Graph(n, std::move(edges));
    ball.labels = std::move(labels);
    std::uint64_t entries = get_u64(encoded, pos);
    for (std::uint64_t e = 0; e < entries; ++e) {
        int len = static_cast<unsigned char>(encoded.at(pos++));
        std::vector<int> tuple(len);
        for (int i = 0; i < len; ++i) tuple[i] = static_cast<unsigned char>(encoded.at(pos++));
        long value = static_cast<long>(get_u64(encoded, pos));
        ball.sg.sigma.emplace(std::move(tuple), value);
    }
    return ball;
}

StructuredGraph permute_structured(const StructuredGraph& sg, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != sg.g.n())
        throw std::invalid_argument("permute_structured: permutation size mismatch");
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : sg.g.edges()) edges.emplace_back(perm[u], perm[v]);
    StructuredGraph out;
    out.g = Graph(sg.g.n(), std::move(edges));
    for (const auto& [tuple, value] : sg.sigma) {
        std::vector<int> mapped(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i) mapped[i] = perm[tuple[i]];
        out.sigma.emplace(std::move(mapped), value);
    }
    return out;
}

InvarianceReport invariance_test(const std::function<long(const RootedBall&)>& fn,
                                 const InvarianceOptions& opts) {
    InvarianceReport rep;
    Rng rng(opts.seed);
    for (long sample = 0; sample < opts.samples; ++sample) {
        int n = 2 + rng.below_int(std::max(1, opts.max_n - 1));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.below(static_cast<std::uint64_t>(n)) < 2) edges.emplace_back(u, v);
        StructuredGraph sg;
        sg.g = Graph(n, std::move(edges));
        if (opts.with_sigma) {
            long tuples = static_cast<long>(rng.below(4));
            for (long t = 0; t < tuples; ++t) {
                std::vector<int> tuple(1 + rng.below_int(2));
                for (auto& x : tuple) x = rng.below_int(n);
                sg.sigma[tuple] = static_cast<long>(rng.below(4));
            }
        }
        Labeling labels(n);
        for (auto& x : labels)
            x = static_cast<long>(rng.below(static_cast<std::uint64_t>(opts.label_range)));
        int v = rng.below_int(n);
        int radius = rng.below_int(opts.max_radius + 1);
        RootedBall b1 = extract_ball(sg, labels, v, radius);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
        StructuredGraph sg2 = permute_structured(sg, perm);
        Labeling labels2(n);
        for (int x = 0; x < n; ++x) labels2[perm[x]] = labels[x];
        RootedBall b2 = extract_ball(sg2, labels2, perm[v], radius);

        ++rep.samples_run;
        if (fn(b1) != fn(b2)) {
            rep.invariant = false;
            rep.counterexample = "sample " + std::to_string(sample) + ": n=" + std::to_string(n) +
                                 " root=" + std::to_string(v) + " R=" + std::to_string(radius);
            return rep;
        }
    }
    return rep;
}

LocalAlgorithm alg_identity() {
    return {"identity", [](const RootedBall& b) { return b.labels[0]; }};
}

LocalAlgorithm alg_constant(long value) {
    return {"constant-" + std::to_string(value), [value](const RootedBall&) { return value; }};
}

LocalAlgorithm alg_label_mod(long q) {
    if (q < 1) throw std::invalid_argument("alg_label_mod: q < 1");
    return {"label-mod-" + std::to_string(q),
            [q](const RootedBall& b) { return b.labels[0] % q; }};
}

LocalAlgorithm alg_greedy_by_id() {
    return {"greedy-by-id", [](const RootedBall& b) {
                int n = b.sg.g.n();
                std::vector<int> order(n);
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(), [&](int x, int y) {
                    return b.labels[x] != b.labels[y] ? b.labels[x] < b.labels[y] : x < y;
                });
                std::vector<long> color(n, -1);
                for (int u : order) {
                    std::vector<char> taken;
                    for (int w : b.sg.g.neighbors(u)) {
                        long c = color[w];
                        if (c >= 0) {
                            if (c >= static_cast<long>(taken.size())) taken.resize(c + 1, 0);
                            taken[c] = 1;
                        }
                    }
                    long c = 0;
                    while (c < static_cast<long>(taken.size()) && taken[c]) ++c;
                    color[u] = c;
                }
                return color[0];
            }};
}

LocalAlgorithm alg_luby_mis() {
    return {"luby-mis", [](const RootedBall& b) -> long {
                const int n = b.sg.g.n();
                const int radius = b.radius;
                auto dist = bfs_distances(b.sg.g, 0);
                // 0 undecided, 1 in, 2 out. One phase = join + dominate,
                // costing two hops; states at distance <= R-2p are exact
                // after phase p, so the root is exact for floor(R/2) phases.
                std::vector<int> state(n, 0);
                int phases = radius / 2;
                for (int p = 1; p <= phases; ++p) {
                    int join_radius = radius - 2 * p + 1;
                    std::vector<char> join(n, 0);
                    for (int u = 0; u < n; ++u) {
                        if (dist[u] > join_radius || state[u] != 0) continue;
                        bool is_max = true;
                        for (int w : b.sg.g.neighbors(u)) {
                            if (state[w] == 0 && w != u && b.labels[w] >= b.labels[u]) {
                                is_max = false;
                                break;
                            }
                        }
                        join[u] = is_max;
                    }
                    for (int u = 0; u < n; ++u)
                        if (join[u] && dist[u] <= join_radius) state[u] = 1;
                    int settle_radius = radius - 2 * p;
                    for (int u = 0; u < n; ++u) {
                        if (dist[u] > settle_radius || state[u] != 0) continue;
                        for (int w : b.sg.g.neighbors(u)) {
                            if (state[w] == 1) {
                                state[u] = 2;
                                break;
                            }
                        }
                    }
                }
                return state[0] == 1 ? 1 : (state[0] == 2 ? 0 : 2);
            }};
}

LocalAlgorithm alg_sinkless_trial() {
    return {"sinkless-trial", [](const RootedBall& b) { return b.labels[0] % 2; }};
}

LCLProblem lcl_always_true() {
    return {"always-true", 0, [](const RootedBall&) { return true; }};
}

LCLProblem lcl_proper_coloring(long q) {
    return {"proper-" + std::to_string(q), 1, [q](const RootedBall& b) {
                if (b.labels[0] < 0 || b.labels[0] >= q) return false;
                for (int w : b.sg.g.neighbors(0))
                    if (b.labels[w] == b.labels[0]) return false;
                return true;
            }};
}

LCLProblem lcl_distinct_labels() {
    return {"distinct-labels", 1, [](const RootedBall& b) {
                for (int w : b.sg.g.neighbors(0))
                    if (b.labels[w] == b.labels[0]) return false;
                return true;
            }};
}

LCLProblem lcl_mis() {
    return {"mis", 1, [](const RootedBall& b) {
                if (b.labels[0] == 1) {
                    for (int w : b.sg.g.neighbors(0))
                        if (b.labels[w] == 1) return false;
                    return true;
                }
                if (b.labels[0] == 0) {
                    for (int w : b.sg.g.neighbors(0))
                        if (b.labels[w] == 1) return true;
                    return false;
                }
                return false;
            }};
}

namespace {

// Whether edge-vertex e leaves the endpoint it shares with the root edge.
// sigma((e, root)) = 1 iff the shared endpoint is e's chosen head; together
// with e's color this determines e's actual head.
bool edge_points_out_of_shared(const RootedBall& b, int e, int root) {
    auto it = b.sg.sigma.find({e, root});
    if (it == b.sg.sigma.end()) throw std::invalid_argument("lcl_sinkless: missing sigma pair");
    bool shared_is_choice = it->second == 1;
    bool toward_choice = b.labels[e] == 0;
    bool head_is_shared = shared_is_choice == toward_choice;
    return !head_is_shared;
}

}  // namespace

LCLProblem lcl_sinkless() {
    return {"sinkless", 1, [](const RootedBall& b) {
                if (b.labels[0] != 0 && b.labels[0] != 1) return false;
                // The root edge's two endpoints: side 1 = its chosen head,
                // side 0 = the other. Each must have an outgoing edge.
                for (int side = 0; side <= 1; ++side) {
                    bool root_out = (side == 1) ? (b.labels[0] == 1) : (b.labels[0] == 0);
                    bool has_out = root_out;
                    if (!has_out) {
                        for (int e : b.sg.g.neighbors(0)) {
                            auto it = b.sg.sigma.find({0, e});
                            if (it == b.sg.sigma.end())
                                throw std::invalid_argument("lcl_sinkless: missing sigma pair");
                            if (it->second != side) continue;
                            if (edge_points_out_of_shared(b, e, 0)) {
                                has_out = true;
                                break;
                            }
                        }
                    }
                    if (!has_out) return false;
                }
                return true;
            }};
}

StructuredGraph sinkless_line_structure(const Graph& g, const std::vector<int>& head_choice) {
    if (static_cast<int>(head_choice.size()) != g.m())
        throw std::invalid_argument("sinkless_line_structure: head choice size mismatch");
    for (int e = 0; e < g.m(); ++e) {
        const auto& [u, v] = g.edges()[e];
        if (head_choice[e] != u && head_choice[e] != v)
            throw std::invalid_argument("sinkless_line_structure: head must be an endpoint");
    }
    auto lg = line_graph(g);
    StructuredGraph out;
    out.g = lg.graph;
    for (const auto& [i, j] : lg.graph.edges()) {
        const auto& [a1, b1] = g.edges()[i];
        const auto& [a2, b2] = g.edges()[j];
        int shared = (a1 == a2 || a1 == b2) ? a1 : b1;
        out.sigma[{i, j}] = (shared == head_choice[i]) ? 1 : 0;
        out.sigma[{j, i}] = (shared == head_choice[j]) ? 1 : 0;
    }
    return out;
}

}  // namespace shatter
