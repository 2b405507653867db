#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shatter/graph.hpp"
#include "shatter/numeric.hpp"

namespace shatter {

/// Graph plus a sparse structure map from vertex tuples (bounded arity) to
/// naturals; absent tuples are undefined.
struct StructuredGraph {
    Graph g;
    std::map<std::vector<int>, long> sigma;

    int max_arity() const;
    void validate() const;
};

StructuredGraph plain(const Graph& g);

/// Per-vertex labels (naturals at desk scale).
using Labeling = std::vector<long>;

/// Induced structured subgraph on B(v,R), re-indexed so that vertex 0 is the
/// root, in BFS layer order with ties by original id. Sigma keeps only tuples
/// that lie entirely inside the ball.
struct RootedBall {
    StructuredGraph sg;
    Labeling labels;
    int radius = 0;
};

RootedBall extract_ball(const StructuredGraph& sg, const Labeling& labels, int v, int radius);

/// A LOCAL algorithm: an isomorphism-invariant output function on rooted
/// labeled balls. Invariance is a contract, enforced statistically by
/// invariance_test rather than by construction.
struct LocalAlgorithm {
    std::string name;
    std::function<long(const RootedBall&)> out;
};

/// An LCL problem: radius plus an isomorphism-invariant accept predicate.
struct LCLProblem {
    std::string name;
    int radius = 0;
    std::function<bool(const RootedBall&)> accept;
};

/// Per-vertex independent evaluation on T-balls; no cross-vertex state.
Labeling run_local(const LocalAlgorithm& alg, const StructuredGraph& sg, const Labeling& labels,
                   int rounds, unsigned threads = 0);

struct LCLCheck {
    bool ok = true;
    VertexSet violations;
};

LCLCheck check_lcl(const LCLProblem& problem, const StructuredGraph& sg, const Labeling& labels);

/// Runs with a unique-identifier labeling (ID must be a bijection onto
/// 0..n-1) and reports the output labeling.
Labeling run_deterministic(const LocalAlgorithm& alg, const StructuredGraph& sg,
                           const std::vector<int>& id, int rounds);

struct RandomizedRunReport {
    long trials = 0;
    long successes = 0;
    double rate = 0;
    double ci_low = 0;   ///< two-sided 95% Wilson interval
    double ci_high = 0;
    bool meets_one_minus_one_over_n = false;
};

/// i.i.d. uniform labels theta: V -> {0..ell-1} per trial, derived from the
/// seed; reports the empirical success rate of check_lcl.
RandomizedRunReport run_randomized(const LocalAlgorithm& alg, const LCLProblem& problem,
                                   const StructuredGraph& sg, long ell, int rounds, long trials,
                                   std::uint64_t seed);

/// Exact success probability by enumerating all ell^n label assignments
/// (budget_error beyond enum_cap).
Rat exact_success_rate(const LocalAlgorithm& alg, const LCLProblem& problem,
                       const StructuredGraph& sg, long ell, int rounds, long enum_cap = 100000);

/// Minimal byte encoding over all root-fixing vertex orderings; two balls are
/// isomorphic iff their canonical strings are equal. Decodable.
std::string canonical_form(const RootedBall& ball, int cap = 12);
RootedBall ball_from_canonical(const std::string& encoded);

/// Applies a vertex permutation to the whole structure (adjacency, labels,
/// sigma). perm[old] = new.
StructuredGraph permute_structured(const StructuredGraph& sg, const std::vector<int>& perm);

struct InvarianceOptions {
    long samples = 100;
    std::uint64_t seed = 1;
    int max_n = 8;
    int max_radius = 2;
    long label_range = 8;
    bool with_sigma = false;
};

struct InvarianceReport {
    bool invariant = true;
    long samples_run = 0;
    std::string counterexample;
};

/// Evaluates the callback on random relabelings of random balls and compares.
InvarianceReport invariance_test(const std::function<long(const RootedBall&)>& fn,
                                 const InvarianceOptions& opts = {});

// Built-in algorithm library (test subjects for the reduction machinery).
LocalAlgorithm alg_identity();
LocalAlgorithm alg_constant(long value);
LocalAlgorithm alg_label_mod(long q);
/// Greedy coloring in increasing-label order within the ball. Correct as a
/// global greedy when run with T >= n and injective labels; invariance holds
/// only for injective labelings.
LocalAlgorithm alg_greedy_by_id();
/// Random-priority greedy MIS, floor(radius/2) phases simulated cone-correctly
/// inside the ball. Output: 1 in MIS, 0 dominated, 2 undecided.
LocalAlgorithm alg_luby_mis();
/// One-round orientation trial on line-structured graphs: label parity.
LocalAlgorithm alg_sinkless_trial();

LCLProblem lcl_always_true();
LCLProblem lcl_proper_coloring(long q);
LCLProblem lcl_distinct_labels();
LCLProblem lcl_mis();
/// Sinkless-orientation validity on the line-structured encoding produced by
/// sinkless_line_structure.
LCLProblem lcl_sinkless();

/// L(G) with sigma on ordered pairs of incident edges: sigma((e,e')) = 1 iff
/// the shared endpoint is head_choice[e]. A labeling f: E -> {0,1} then reads
/// as "e points to head_choice[e] iff f(e) = 0".
StructuredGraph sinkless_line_structure(const Graph& g, const std::vector<int>& head_choice);

}  // namespace shatter
