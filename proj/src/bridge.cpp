#include "shatter/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <memory>
#include <sstream>

#include "shatter/util.hpp"

namespace shatter {

namespace {

// Shared by all per-vertex predicates; owned jointly so lazy constraints
// stay valid after the reduction call returns.
struct ReductionContext {
    StructuredGraph sg;
    LocalAlgorithm alg;
    LCLProblem problem;
    int rounds;
};

// Failure predicate of the constraint at v: does the verifier reject at v
// when the algorithm runs on theta? theta is given on the R*-ball around v,
// which covers every T-ball the outputs on B(v,R) depend on.
struct FailurePredicate {
    std::shared_ptr<const ReductionContext> ctx;
    int vertex;
    std::vector<int> domain;  // B(v, R*) sorted
    std::vector<int> inner;   // B(v, R)

    bool operator()(std::span<const int> tuple) const {
        Labeling theta(ctx->sg.g.n(), 0);
        for (std::size_t i = 0; i < domain.size(); ++i) theta[domain[i]] = tuple[i];
        Labeling out(ctx->sg.g.n(), 0);
        for (int u : inner) out[u] = ctx->alg.out(extract_ball(ctx->sg, theta, u, ctx->rounds));
        return !ctx->problem.accept(extract_ball(ctx->sg, out, vertex, ctx->problem.radius));
    }
};

Graph power_or_edgeless(const Graph& g, int radius) {
    return radius >= 1 ? power_graph(g, radius) : Graph(g.n(), {});
}

bool enumerable(long ell, std::size_t len, long cap) {
    double total = 1;
    for (std::size_t i = 0; i < len; ++i) {
        total *= static_cast<double>(ell);
        if (total > static_cast<double>(cap)) return false;
    }
    return true;
}

}  // namespace

ReductionOutput lcl_to_csp(const LCLProblem& problem, const LocalAlgorithm& alg, int rounds,
                           long ell, const StructuredGraph& sg, const ReductionOptions& opts) {
    if (ell < 1) throw std::invalid_argument("lcl_to_csp: ell must be >= 1");
    if (rounds < 0 || problem.radius < 0)
        throw std::invalid_argument("lcl_to_csp: negative radius");
    sg.validate();
    ReductionOutput red;
    red.rounds = rounds;
    red.radius_star = rounds + problem.radius;
    red.ell = ell;
    red.csp.q = static_cast<int>(ell);
    red.csp.universe = range_universe(sg.g.n());
    red.csp.constraints.resize(sg.g.n());
    red.ball_sizes.resize(sg.g.n());
    red.ball_sizes_2r.resize(sg.g.n());

    std::vector<Rat> probs(sg.g.n(), Rat(0));
    std::vector<char> exact(sg.g.n(), 1);
    std::vector<std::exception_ptr> errors(sg.g.n());
    auto ctx = std::make_shared<const ReductionContext>(
        ReductionContext{sg, alg, problem, rounds});
    parallel_for(
        static_cast<std::size_t>(sg.g.n()),
        [&](std::size_t vi) {
            try {
                int v = static_cast<int>(vi);
                FailurePredicate pred{ctx, v, ball(sg.g, v, red.radius_star),
                                      ball(sg.g, v, problem.radius)};
                auto domain = pred.domain;
                red.ball_sizes[vi] = static_cast<long>(domain.size());
                red.ball_sizes_2r[vi] =
                    static_cast<long>(ball(sg.g, v, 2 * red.radius_star).size());
                Constraint c = Constraint::lazy(domain, static_cast<int>(ell), pred);
                if (enumerable(ell, domain.size(), opts.materialize_cap)) {
                    c.materialize(opts.materialize_cap);
                    probs[vi] = probability(c, opts.materialize_cap);
                } else {
                    // Over the cap: keep the predicate and estimate p by
                    // uniform sampling (flagged as inexact in the output).
                    exact[vi] = 0;
                    Rng rng(child_seed(opts.seed, "p-estimate", vi));
                    long hits = 0;
                    std::vector<int> tuple(domain.size());
                    for (long t = 0; t < opts.sample_trials; ++t) {
                        for (auto& x : tuple)
                            x = static_cast<int>(rng.below(static_cast<std::uint64_t>(ell)));
                        if (pred(tuple)) ++hits;
                    }
                    probs[vi] = make_rat(hits, opts.sample_trials);
                }
                red.csp.constraints[vi] = std::move(c);
            } catch (...) {
                errors[vi] = std::current_exception();
            }
        },
        opts.threads);
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (int v = 0; v < sg.g.n(); ++v) {
        red.p_exact = std::max(red.p_exact, probs[v]);
        if (!exact[v]) red.p_is_exact = false;
    }
    red.d_value = d_param(red.csp);
    return red;
}

Labeling decode_reduction(const ReductionOutput& red, const LocalAlgorithm& alg,
                          const StructuredGraph& sg, const Labeling& theta) {
    return run_local(alg, sg, theta, red.rounds);
}

ReductionChecks verify_reduction(const ReductionOutput& red, const LCLProblem& problem,
                                 const LocalAlgorithm& alg, const StructuredGraph& sg,
                                 long samples, std::uint64_t seed, long solution_enum_cap) {
    ReductionChecks out;
    std::ostringstream detail;
    const int n = sg.g.n();
    out.one_over_n = n > 0 ? make_rat(1, n) : Rat(0);
    out.p_value = red.p_exact;
    out.p_at_most_one_over_n = red.p_exact <= out.one_over_n;

    // (b) structural bounds.
    for (int v = 0; v < n; ++v) {
        auto b = ball(sg.g, v, red.radius_star);
        if (red.csp.constraints[v].domain() != b) out.domains_are_balls = false;
    }
    long max_ball2 = 0;
    for (long b : red.ball_sizes_2r) max_ball2 = std::max(max_ball2, b);
    out.d_bound_ok = red.d_value <= max_ball2 - 1;
    Graph dep = dependency_graph(red.csp);
    Graph pow = power_or_edgeless(sg.g, 2 * red.radius_star);
    out.subgraph_ok = true;
    for (const auto& [u, w] : dep.edges())
        if (!pow.has_edge(u, w)) out.subgraph_ok = false;

    // (a) found solutions must decode to verifier-passing labelings.
    // Single-threaded inner runs: the per-solution work is tiny and pool
    // churn would dominate at enumeration counts.
    auto check_solution = [&](const Labeling& theta) {
        Labeling decoded = run_local(alg, sg, theta, red.rounds, 1);
        if (!check_lcl(problem, sg, decoded).ok) out.all_decoded_pass = false;
        ++out.solutions_checked;
    };
    if (enumerable(red.ell, static_cast<std::size_t>(n), solution_enum_cap)) {
        out.solutions_enumerated = true;
        Labeling theta(n, 0);
        PartialColoring f(static_cast<int>(red.ell));
        for (;;) {
            bool sat = true;
            for (int v = 0; v < n && sat; ++v) {
                f.assign.clear();
                for (int u : red.csp.constraints[v].domain())
                    f.assign[u] = static_cast<int>(theta[u]);
                if (violates(f, red.csp.constraints[v])) sat = false;
            }
            if (sat) check_solution(theta);
            std::size_t i = theta.size();
            while (i > 0) {
                if (++theta[i - 1] < red.ell) break;
                theta[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
        detail << "enumerated assignments, " << out.solutions_checked << " solutions; ";
    } else {
        long found = 0;
        for (long t = 0; t < samples; ++t) {
            auto mt = moser_tardos(red.csp, child_seed(seed, "verify-sample", t));
            if (mt.solution) {
                Labeling theta(n);
                for (int v = 0; v < n; ++v) theta[v] = mt.solution->at(v);
                check_solution(theta);
                ++found;
            }
        }
        detail << "sampled " << samples << " runs, " << found << " solutions; ";
        if (found == 0) detail << "no solutions found (item (a) vacuous); ";
    }
    out.detail = detail.str();
    return out;
}

namespace {

std::string type_key(const std::vector<std::set<std::vector<int>>>& type) {
    std::ostringstream key;
    for (const auto& cset : type) {
        key << "C";
        for (const auto& t : cset) {
            key << "(";
            for (int c : t) key << c << ",";
            key << ")";
        }
    }
    return key.str();
}

}  // namespace

GraphCSPEncoding encode_graph_csp(const Graph& g, const CSP& csp, long enum_cap) {
    csp.validate();
    if (csp.universe != range_universe(g.n()))
        throw std::invalid_argument("encode_graph_csp: CSP universe must be V(G)");
    // Group constraints by their domain as a set; each group becomes a type.
    std::map<std::vector<int>, std::set<std::set<std::vector<int>>>> by_domain;
    for (const auto& c : csp.constraints) {
        Constraint norm = c.normalized(enum_cap);
        const auto& dom = norm.domain();
        for (std::size_t i = 0; i < dom.size(); ++i)
            for (std::size_t j = i + 1; j < dom.size(); ++j)
                if (!g.has_edge(dom[i], dom[j]))
                    throw std::invalid_argument(
                        "encode_graph_csp: constraint domain is not a clique of G");
        if (dom.size() > 6)
            throw budget_error("encode_graph_csp: domain arity above encoding bound");
        by_domain[dom].insert(norm.forbidden());
    }
    GraphCSPEncoding enc;
    enc.sg.g = g;
    enc.q = csp.q;
    std::map<std::string, long> code_of;
    auto intern = [&](std::vector<std::set<std::vector<int>>> type) {
        auto key = type_key(type);
        auto [it, fresh] = code_of.emplace(key, static_cast<long>(enc.code_table.size()));
        if (fresh) enc.code_table.push_back(std::move(type));
        return it->second;
    };
    for (const auto& [dom, forb_sets] : by_domain) {
        if (dom.empty()) {
            enc.sg.sigma[{}] =
                intern({forb_sets.begin(), forb_sets.end()});
            continue;
        }
        std::vector<int> v_order = dom;
        do {
            // Position of each ordered entry in the sorted domain.
            std::vector<std::size_t> pos(dom.size());
            for (std::size_t i = 0; i < v_order.size(); ++i)
                pos[i] = static_cast<std::size_t>(
                    std::lower_bound(dom.begin(), dom.end(), v_order[i]) - dom.begin());
            std::vector<std::set<std::vector<int>>> type;
            for (const auto& fset : forb_sets) {
                std::set<std::vector<int>> aligned;
                std::vector<int> t(dom.size());
                for (const auto& tuple : fset) {
                    for (std::size_t i = 0; i < dom.size(); ++i) t[i] = tuple[pos[i]];
                    aligned.insert(t);
                }
                type.insert(std::upper_bound(type.begin(), type.end(), aligned),
                            std::move(aligned));
            }
            enc.sg.sigma[v_order] = intern(std::move(type));
        } while (std::next_permutation(v_order.begin(), v_order.end()));
    }
    return enc;
}

CSP decode_graph_csp(const GraphCSPEncoding& enc) {
    CSP csp;
    csp.q = enc.q;
    csp.universe = range_universe(enc.sg.g.n());
    for (const auto& [tuple, code] : enc.sg.sigma) {
        if (code < 0 || code >= static_cast<long>(enc.code_table.size()))
            throw std::invalid_argument("decode_graph_csp: code out of range");
        if (!std::is_sorted(tuple.begin(), tuple.end())) continue;
        for (const auto& fset : enc.code_table[code])
            csp.constraints.push_back(Constraint::table(tuple, enc.q, fset));
    }
    // Cross-check: every non-sorted ordering must decode to the same
    // constraints after realignment.
    for (const auto& [tuple, code] : enc.sg.sigma) {
        if (std::is_sorted(tuple.begin(), tuple.end())) continue;
        std::vector<int> sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        auto it = enc.sg.sigma.find(sorted);
        if (it == enc.sg.sigma.end())
            throw std::invalid_argument("decode_graph_csp: missing sorted ordering");
        std::set<std::set<std::vector<int>>> from_sorted(enc.code_table[it->second].begin(),
                                                         enc.code_table[it->second].end());
        std::set<std::set<std::vector<int>>> realigned;
        std::vector<std::size_t> pos(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i)
            pos[i] = static_cast<std::size_t>(
                std::lower_bound(sorted.begin(), sorted.end(), tuple[i]) - sorted.begin());
        for (const auto& fset : enc.code_table[code]) {
            std::set<std::vector<int>> aligned;
            std::vector<int> t(tuple.size());
            for (const auto& tup : fset) {
                for (std::size_t i = 0; i < tuple.size(); ++i) t[pos[i]] = tup[i];
                aligned.insert(t);
            }
            realigned.insert(std::move(aligned));
        }
        if (realigned != from_sorted)
            throw std::invalid_argument("decode_graph_csp: inconsistent orderings");
    }
    return csp;
}

Labeling pipeline_theorem48(const LCLProblem& problem, const LocalAlgorithm& alg, int rounds,
                            long ell, const StructuredGraph& sg, const SeparationWitness& witness,
                            const PipelineOptions& opts, PipelineReport* report) {
    PipelineReport local;
    PipelineReport& rep = report ? *report : local;

    ReductionOutput red = lcl_to_csp(problem, alg, rounds, ell, sg, opts.reduction);
    rep.radius_star = red.radius_star;
    rep.p = red.p_exact;
    rep.d = red.d_value;
    for (long b : red.ball_sizes) rep.max_ball = std::max(rep.max_ball, b);
    for (long b : red.ball_sizes_2r) rep.max_ball_2r = std::max(rep.max_ball_2r, b);
    if (!red.p_is_exact)
        throw pipeline_error("pipeline: p could not be computed exactly (constraints over cap)");

    // Reuse the witness parts on G^{2R*}; components are recomputed and the
    // locality budget rescales by the ball-size bound.
    Graph pow = power_or_edgeless(sg.g, 2 * red.radius_star);
    rep.witness_s = witness.s();
    rep.shatter_s = witness.s() + 1;
    rep.rescaled_budget = witness.budget * std::max<long>(1, rep.max_ball_2r);
    SeparationWitness rescaled{witness.parts, rep.rescaled_budget};
    auto check = verify_separation(pow, rescaled.parts, rescaled.budget);
    if (!check.ok)
        throw pipeline_error(
            "pipeline: witness does not separate G^{2R*}: component of size " +
            std::to_string(check.worst_size) + " exceeds rescaled budget " +
            std::to_string(rep.rescaled_budget));
    FinitePartition partition = partition_from_separation(pow, rescaled);

    long width = shattering_width(partition, red.csp);
    if (width > rep.shatter_s)
        throw pipeline_error("pipeline: shattering width " + std::to_string(width) +
                             " exceeds s+1 = " + std::to_string(rep.shatter_s));
    rep.condition = check_condition(red.csp, LLLCondition::shatter(rep.shatter_s), opts.numeric);
    if (!rep.condition.holds())
        throw pipeline_error("pipeline: condition p(d+1)^" + std::to_string(rep.shatter_s) +
                             " <= e^-" + std::to_string(rep.shatter_s) +
                             " fails: lhs=" + rat_to_string(rep.condition.lhs) + " (~" +
                             std::to_string(rep.condition.lhs_approx) + ") vs rhs~" +
                             std::to_string(rep.condition.rhs_approx));

    // Informational only: whether max |B(v,2R*)| <= n^{1/(s+1)} / e.
    {
        double n = static_cast<double>(sg.g.n());
        double bound = std::pow(n, 1.0 / static_cast<double>(rep.witness_s + 1)) / std::exp(1.0);
        rep.ball_hypothesis_ok = static_cast<double>(rep.max_ball_2r) <= bound;
    }

    SolveOptions solve_opts;
    solve_opts.budget = rep.rescaled_budget;
    solve_opts.conditioning_cap = opts.reduction.materialize_cap;
    solve_opts.numeric = opts.numeric;
    solve_opts.threads = opts.threads;
    PartialColoring theta =
        shattering_solve(red.csp, partition, rep.shatter_s, solve_opts, &rep.solve);

    Labeling theta_labels(sg.g.n());
    for (int v = 0; v < sg.g.n(); ++v) theta_labels[v] = theta.at(v);
    Labeling out = decode_reduction(red, alg, sg, theta_labels);
    auto lcl = check_lcl(problem, sg, out);
    if (!lcl.ok)
        throw std::logic_error("pipeline: decoded output fails the verifier (soundness bug)");
    rep.lcl_verified = true;
    return out;
}

}  // namespace shatter
