#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shatter/csp.hpp"
#include "shatter/numeric.hpp"
#include "shatter/shattering.hpp"

namespace shatter {

/// The satisfiability criteria used throughout: classic p(d+1) <= 1/e,
/// shatter p(d+1)^s <= e^-s, separation p(d+1)^{s+1} <= e^{-s-1}, and the
/// polynomial criterion p(d+1)^8 <= 2^-15.
struct LLLCondition {
    enum class Kind { Classic, Shatter, Separation, Polynomial };
    Kind kind = Kind::Classic;
    long s = 0;

    static LLLCondition classic() { return {Kind::Classic, 0}; }
    static LLLCondition shatter(long s) { return {Kind::Shatter, s}; }
    static LLLCondition separation(long s) { return {Kind::Separation, s}; }
    static LLLCondition polynomial() { return {Kind::Polynomial, 0}; }

    std::string name() const;
};

enum class ConditionStatus { Fails, Holds, HoldsStrictly };

struct ConditionReport {
    ConditionStatus status = ConditionStatus::Fails;
    Rat p;                  ///< p(B), exact
    long d = 0;             ///< d(B)
    long exponent = 0;      ///< power of (d+1) on the left-hand side
    Rat lhs;                ///< exact p * (d+1)^exponent
    Rat rhs_scale;          ///< rhs = rhs_scale * e^{rhs_e_exponent}
    long rhs_e_exponent = 0;
    double lhs_approx = 0;
    double rhs_approx = 0;
    unsigned bits_used = 0;  ///< interval precision that settled the comparison
    bool tie_possible = false;  ///< rational-vs-rational comparisons only
    std::string note;

    bool holds() const { return status != ConditionStatus::Fails; }
};

/// Evaluates the exact rational LHS against the threshold. When the threshold
/// is irrational (nonzero e-exponent) a tie is impossible for a nonzero
/// rational LHS, so the verdict is HoldsStrictly or Fails; equality is only
/// reportable on the all-rational comparisons.
ConditionReport check_condition(const CSP& csp, const LLLCondition& cond,
                                const NumericConfig& numeric = {});

/// H: classes adjacent iff some constraint domain meets both.
Graph class_conflict_graph(const FinitePartition& partition, const CSP& csp);

struct RoundSchedule {
    std::vector<int> class_round;              ///< per class, greedy color
    std::vector<VertexSet> rounds;             ///< union of classes per round
    std::vector<std::vector<int>> round_classes;
};

/// Greedy proper coloring of H in class order; rounds ordered by color.
/// Requires s >= shattering_width(partition, csp).
RoundSchedule greedy_schedule(const Graph& conflict, const FinitePartition& partition,
                              const CSP& csp, long s);

/// B*: domain dom(B) & U; psi is forbidden iff
/// P[B|psi] >= (e(d+1))^{-s_B+1}, decided by interval arithmetic. Satisfies
/// P[B*] <= P[B] (e(d+1))^{s_B-1}.
Constraint threshold_constraint(const Constraint& b, const VertexSet& u, long s_b, long d,
                                const NumericConfig& numeric = {},
                                long conditioning_cap = 1000000);

/// Interval-certified check of the Markov bound P[B*] <= P[B]*(e(d+1))^{s-1}.
bool markov_bound_holds(const Rat& p_star, const Rat& p_b, long s_b, long d,
                        const NumericConfig& numeric = {});

struct StepOptions {
    long budget = 20;               ///< component budget for G_B[U]
    long conditioning_cap = 1000000;
    NumericConfig numeric;
    unsigned threads = 0;
};

struct StepAudit {
    std::vector<int> eta;  ///< per constraint, 1 iff dom(B) meets U
    long d_before = 0;
    long d_after = 0;
};

/// One application of the conditional-probability step: colors U so that
/// every constraint's residual satisfies
/// P[B/f] (d'+1)^{s(B)-eta(B)} < e^{-s(B)+eta(B)}.
/// The inequality is audited after the fact; a failed audit is an
/// implementation bug and throws logic_error.
PartialColoring shattering_step(const CSP& csp, const VertexSet& u,
                                const std::vector<long>& s_of, const StepOptions& opts,
                                CSP* residual_out = nullptr, StepAudit* audit_out = nullptr);

struct SolveOptions {
    long budget = 20;  ///< class size budget (components of each round stay inside classes)
    long conditioning_cap = 1000000;
    NumericConfig numeric;
    unsigned threads = 0;
    bool keep_trace = true;
};

struct RoundTrace {
    int round = 0;
    long class_count = 0;
    long u_size = 0;
    std::vector<long> s_before;  ///< s_n(B) entering this round
    std::vector<int> eta;        ///< which constraints the round touched
};

struct ShatteringReport {
    ConditionReport entry;
    long width = 0;
    long rounds = 0;
    std::vector<long> round_class_counts;
    std::vector<RoundTrace> trace;
    std::vector<long> t_final;  ///< t_n(B) after the last round
    bool verified = false;
};

/// The deterministic solver: checks the shatter condition, schedules the
/// classes greedily, then iterates shattering_step round by round. The
/// returned coloring is total and is verified against every constraint
/// before returning (the final residual of each constraint must be the empty
/// always-satisfied constraint).
PartialColoring shattering_solve(const CSP& csp, const FinitePartition& partition, long s,
                                 const SolveOptions& opts = {},
                                 ShatteringReport* report = nullptr);

struct MoserTardosResult {
    std::optional<PartialColoring> solution;
    long resamples = 0;
    long max_resamples = 0;
    std::string diagnostics;
};

/// Randomized baseline: uniform initial coloring, then repeatedly resample
/// the violated constraint of least index. Deterministic given seed. May be
/// run on CSPs that violate every condition; gives up after max_resamples
/// (default 50*m + 1000).
MoserTardosResult moser_tardos(const CSP& csp, std::uint64_t seed, long max_resamples = -1);

}  // namespace shatter
