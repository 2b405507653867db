#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "shatter/graph.hpp"
#include "shatter/numeric.hpp"

namespace shatter {

/// Partial map vertex-id -> color in {0..q-1}. Deterministic iteration order.
struct PartialColoring {
    int q = 1;
    std::map<int, int> assign;

    PartialColoring() = default;
    explicit PartialColoring(int q_) : q(q_) {}

    bool has(int v) const { return assign.count(v) != 0; }
    int at(int v) const;
    void set(int v, int color);
    VertexSet domain() const;
    std::size_t size() const { return assign.size(); }

    /// Disjoint union; throws if the domains overlap with disagreement.
    static PartialColoring join(const PartialColoring& a, const PartialColoring& b);
};

/// A constraint is an ordered domain of distinct vertex ids plus the set of
/// forbidden total assignments over it, positionally aligned with the domain
/// order. The backing is either an explicit tuple table or a predicate
/// ("lazy"); lazy constraints answer the same queries by enumerating the
/// residual domain, with conditional counts memoized.
class Constraint {
  public:
    Constraint() = default;

    static Constraint table(std::vector<int> domain, int q,
                            std::set<std::vector<int>> forbidden);
    static Constraint lazy(std::vector<int> domain, int q,
                           std::function<bool(std::span<const int>)> predicate);

    /// Empty-domain constants: {()} is violated by everything, {} by nothing.
    static Constraint always_violated(int q);
    static Constraint always_satisfied(int q);

    const std::vector<int>& domain() const { return domain_; }
    int q() const { return q_; }
    bool is_lazy() const { return static_cast<bool>(lazy_); }

    /// Explicit forbidden set; throws on lazy constraints.
    const std::set<std::vector<int>>& forbidden() const;

    /// True iff the positionally aligned total tuple is forbidden.
    bool forbids(std::span<const int> tuple) const;

    /// Number of forbidden tuples, enumerating a lazy backing (at most
    /// enum_cap assignments, else budget_error).
    mpz_class forbidden_count(long enum_cap) const;

    /// Number of forbidden completions of a partial assignment on a subset of
    /// the domain. Lazy constraints memoize these counts.
    mpz_class conditional_count(const std::map<int, int>& partial, long enum_cap) const;

    /// Converts a lazy constraint to a table in place (enumeration bounded by
    /// enum_cap).
    void materialize(long enum_cap);

    /// Same constraint with the domain sorted ascending and tuples permuted
    /// accordingly. Materializes.
    Constraint normalized(long enum_cap) const;

  private:
    std::vector<int> domain_;
    int q_ = 1;
    std::set<std::vector<int>> forbidden_;
    bool has_table_ = false;

    struct LazyCore;
    std::shared_ptr<LazyCore> lazy_;

    friend Constraint restrict_constraint(const Constraint&, const PartialColoring&);
};

/// Order-normalized equality: same domain as a set, same forbidden set after
/// permuting tuple positions.
bool constraints_equal(const Constraint& a, const Constraint& b, long enum_cap = 1000000);

/// f must be total on dom(B); true iff f|dom(B) is forbidden.
bool violates(const PartialColoring& f, const Constraint& b);

/// P[B] = |B| / q^{|dom(B)|}, exact.
Rat probability(const Constraint& b, long enum_cap = 1000000);

/// B/f: the residual constraint on dom(B) \ dom(f). Collapses to {()} or {}
/// when dom(B) is fully assigned.
Constraint restrict_constraint(const Constraint& b, const PartialColoring& f);

/// P[B | psi] where psi is total exactly on dom(B) & U: the probability that
/// a uniform completion violates B. Exact; equals probability(restrict(B,psi)).
Rat conditional_probability(const Constraint& b, const PartialColoring& psi,
                            const VertexSet& u, long enum_cap = 1000000);

struct CSP {
    VertexSet universe;  ///< variable ids; constraint domains must lie inside
    int q = 1;
    std::vector<Constraint> constraints;

    void validate() const;
};

/// Proper dense-range universe 0..n-1.
VertexSet range_universe(int n);

Rat p_param(const CSP& csp, long enum_cap = 1000000);
/// Max over constraints of the number of *other* constraints sharing a
/// domain vertex. Duplicates count separately (multiset semantics).
long d_param(const CSP& csp);
/// Per-constraint overlap counts, aligned with csp.constraints.
std::vector<long> overlap_counts(const CSP& csp);

/// G_B: vertices = 0..bound-1 where bound covers the universe; x ~ y iff they
/// share a constraint domain.
Graph dependency_graph(const CSP& csp);

/// B/f applied to every constraint; universe shrinks by dom(f).
CSP restrict_csp(const CSP& csp, const PartialColoring& f);

struct BruteForceOptions {
    long component_budget = 20;  ///< refuse components with more variables
    unsigned threads = 0;        ///< 0 = hardware default
};

/// Per-component lexicographic search with one-step lookahead propagation.
/// Returns the lexicographically least solution (vars ascending, colors
/// ascending), or nullopt if some component is unsatisfiable.
std::optional<PartialColoring> brute_force_solve(const CSP& csp,
                                                 const BruteForceOptions& opts = {});

}  // namespace shatter
