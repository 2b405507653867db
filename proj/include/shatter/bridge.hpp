#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "shatter/csp.hpp"
#include "shatter/lll.hpp"
#include "shatter/local.hpp"

namespace shatter {

/// The CSP over random labels whose solutions are exactly the label
/// assignments on which the algorithm's output passes the verifier
/// everywhere. Constraint domains are R*-balls (R* = T + R), hence the
/// structural bounds d <= max |B(v,2R*)| - 1 and G_B <= G^{2R*}.
struct ReductionOutput {
    CSP csp;
    int rounds = 0;        ///< T
    int radius_star = 0;   ///< R* = T + R
    long ell = 0;
    std::vector<long> ball_sizes;        ///< |B(v,R*)| per vertex
    std::vector<long> ball_sizes_2r;     ///< |B(v,2R*)| per vertex
    Rat p_exact;                          ///< max constraint probability
    bool p_is_exact = true;               ///< false when estimated by sampling
    long d_value = 0;
};

struct ReductionOptions {
    long materialize_cap = 1000000;  ///< per-constraint enumeration bound
    long sample_trials = 2000;       ///< p estimation for over-cap constraints
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

ReductionOutput lcl_to_csp(const LCLProblem& problem, const LocalAlgorithm& alg, int rounds,
                           long ell, const StructuredGraph& sg,
                           const ReductionOptions& opts = {});

/// Decode: theta |-> A_T(G, theta).
Labeling decode_reduction(const ReductionOutput& red, const LocalAlgorithm& alg,
                          const StructuredGraph& sg, const Labeling& theta);

struct ReductionChecks {
    long solutions_checked = 0;
    bool solutions_enumerated = false;  ///< exhaustive vs sampled
    bool all_decoded_pass = true;
    bool domains_are_balls = true;
    bool d_bound_ok = true;
    bool subgraph_ok = true;
    Rat p_value;
    Rat one_over_n;
    bool p_at_most_one_over_n = false;
    std::string detail;
};

/// (a) solutions decode to verifier-passing labelings, (b) structural bounds,
/// (c) p against 1/n. Failures are report entries, not exceptions.
ReductionChecks verify_reduction(const ReductionOutput& red, const LCLProblem& problem,
                                 const LocalAlgorithm& alg, const StructuredGraph& sg,
                                 long samples = 20, std::uint64_t seed = 1,
                                 long solution_enum_cap = 100000);

/// Structured-graph encoding of a graph-CSP: sigma assigns to every ordered
/// tuple of a constrained set the code of its order-normalized constraint
/// type; an injective code table makes the pair (G, sigma) carry exactly the
/// information of (G, B).
struct GraphCSPEncoding {
    StructuredGraph sg;
    int q = 1;
    /// code -> type: a type is the set of constraints with a given domain,
    /// each stored as tuples aligned with the encoded tuple order.
    std::vector<std::vector<std::set<std::vector<int>>>> code_table;
};

/// Requires G_B to be a subgraph of G (every domain a clique of G) and a
/// bounded, materialized CSP.
GraphCSPEncoding encode_graph_csp(const Graph& g, const CSP& csp, long enum_cap = 1000000);

/// Inverse of encode up to domain-order normalization (and collapsing of
/// duplicate constraints sharing a domain).
CSP decode_graph_csp(const GraphCSPEncoding& enc);

struct PipelineReport {
    int radius_star = 0;
    long max_ball = 0;      ///< max |B(v,R*)|
    long max_ball_2r = 0;   ///< max |B(v,2R*)|
    Rat p;
    long d = 0;
    ConditionReport condition;
    long witness_s = 0;
    long shatter_s = 0;     ///< s+1 actually used by the solver
    long rescaled_budget = 0;
    bool ball_hypothesis_ok = false;  ///< |B(v,2R*)| <= n^{1/(s+1)}/e, reported only
    ShatteringReport solve;
    bool lcl_verified = false;
};

/// Raised when a pipeline precondition (witness reuse, condition margin)
/// fails; carries the failed inequality in what().
struct pipeline_error : std::runtime_error {
    explicit pipeline_error(const std::string& what) : std::runtime_error(what) {}
};

struct PipelineOptions {
    ReductionOptions reduction;
    NumericConfig numeric;
    unsigned threads = 0;
};

/// End-to-end: reduce, re-derive the shattering partition from the witness
/// on G^{2R*}, check the shatter condition, run the deterministic solver,
/// decode, and verify the LCL. Precondition failures raise pipeline_error
/// with the failing inequality and margins.
Labeling pipeline_theorem48(const LCLProblem& problem, const LocalAlgorithm& alg, int rounds,
                            long ell, const StructuredGraph& sg, const SeparationWitness& witness,
                            const PipelineOptions& opts = {}, PipelineReport* report = nullptr);

}  // namespace shatter
