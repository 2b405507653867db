#include "shatter/csp.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "shatter/util.hpp"

namespace shatter {

int PartialColoring::at(int v) const {
    auto it = assign.find(v);
    if (it == assign.end()) throw std::invalid_argument("PartialColoring: vertex unassigned");
    return it->second;
}

void PartialColoring::set(int v, int color) {
    if (color < 0 || color >= q) throw std::invalid_argument("PartialColoring: color out of range");
    assign[v] = color;
}

VertexSet PartialColoring::domain() const {
    VertexSet out;
    out.reserve(assign.size());
    for (const auto& [v, c] : assign) out.push_back(v);
    return out;
}

PartialColoring PartialColoring::join(const PartialColoring& a, const PartialColoring& b) {
    if (a.q != b.q) throw std::invalid_argument("PartialColoring::join: mismatched q");
    PartialColoring out = a;
    for (const auto& [v, c] : b.assign) {
        auto [it, inserted] = out.assign.emplace(v, c);
        if (!inserted && it->second != c)
            throw std::invalid_argument("PartialColoring::join: conflicting assignment");
    }
    return out;
}

struct Constraint::LazyCore {
    std::function<bool(std::span<const int>)> pred;
    mutable std::mutex mu;
    // (ids of dom&U, psi tuple) -> number of violating completions
    mutable std::map<std::pair<std::vector<int>, std::vector<int>>, mpz_class> cond_cache;
};

namespace {

void check_domain(const std::vector<int>& domain) {
    std::vector<int> copy = domain;
    std::sort(copy.begin(), copy.end());
    if (std::adjacent_find(copy.begin(), copy.end()) != copy.end())
        throw std::invalid_argument("Constraint: duplicate vertex in domain");
    if (!copy.empty() && copy.front() < 0)
        throw std::invalid_argument("Constraint: negative vertex id");
}

// Runs fn on every total tuple over |positions| slots with q colors, in
// lexicographic order. fn returns false to stop.
template <typename Fn>
void enumerate_tuples(std::size_t len, int q, Fn&& fn) {
    std::vector<int> tuple(len, 0);
    for (;;) {
        if (!fn(tuple)) return;
        std::size_t i = len;
        while (i > 0) {
            if (++tuple[i - 1] < q) break;
            tuple[i - 1] = 0;
            --i;
        }
        if (i == 0) return;
    }
}

mpz_class ipow_z(long q, std::size_t k) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(k));
    return out;
}

bool fits_cap(int q, std::size_t len, long cap) {
    double total = 1.0;
    for (std::size_t i = 0; i < len; ++i) {
        total *= q;
        if (total > static_cast<double>(cap)) return false;
    }
    return true;
}

}  // namespace

Constraint Constraint::table(std::vector<int> domain, int q,
                             std::set<std::vector<int>> forbidden) {
    if (q < 1) throw std::invalid_argument("Constraint: q < 1");
    check_domain(domain);
    for (const auto& t : forbidden) {
        if (t.size() != domain.size())
            throw std::invalid_argument("Constraint: tuple length != domain size");
        for (int c : t)
            if (c < 0 || c >= q) throw std::invalid_argument("Constraint: color out of range");
    }
    Constraint out;
    out.domain_ = std::move(domain);
    out.q_ = q;
    out.forbidden_ = std::move(forbidden);
    out.has_table_ = true;
    return out;
}

Constraint Constraint::lazy(std::vector<int> domain, int q,
                            std::function<bool(std::span<const int>)> predicate) {
    if (q < 1) throw std::invalid_argument("Constraint: q < 1");
    check_domain(domain);
    Constraint out;
    out.domain_ = std::move(domain);
    out.q_ = q;
    out.lazy_ = std::make_shared<LazyCore>();
    out.lazy_->pred = std::move(predicate);
    return out;
}

Constraint Constraint::always_violated(int q) { return table({}, q, {{}}); }

Constraint Constraint::always_satisfied(int q) { return table({}, q, {}); }

const std::set<std::vector<int>>& Constraint::forbidden() const {
    if (!has_table_) throw std::logic_error("Constraint::forbidden: lazy constraint");
    return forbidden_;
}

bool Constraint::forbids(std::span<const int> tuple) const {
    if (tuple.size() != domain_.size())
        throw std::invalid_argument("Constraint::forbids: tuple length mismatch");
    if (has_table_) {
        thread_local std::vector<int> key;
        key.assign(tuple.begin(), tuple.end());
        return forbidden_.count(key) != 0;
    }
    return lazy_->pred(tuple);
}

mpz_class Constraint::forbidden_count(long enum_cap) const {
    return conditional_count({}, enum_cap);
}

mpz_class Constraint::conditional_count(const std::map<int, int>& partial, long enum_cap) const {
    std::vector<int> fixed(domain_.size(), -1);
    std::vector<std::size_t> free_pos;
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        auto it = partial.find(domain_[i]);
        if (it != partial.end())
            fixed[i] = it->second;
        else
            free_pos.push_back(i);
    }
    if (has_table_) {
        mpz_class count = 0;
        for (const auto& tuple : forbidden_) {
            bool match = true;
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                if (fixed[i] >= 0 && tuple[i] != fixed[i]) {
                    match = false;
                    break;
                }
            }
            if (match) ++count;
        }
        return count;
    }
    std::pair<std::vector<int>, std::vector<int>> key;
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        if (fixed[i] >= 0) {
            key.first.push_back(domain_[i]);
            key.second.push_back(fixed[i]);
        }
    }
    std::lock_guard<std::mutex> lock(lazy_->mu);
    auto it = lazy_->cond_cache.find(key);
    if (it != lazy_->cond_cache.end()) return it->second;
    if (!fits_cap(q_, free_pos.size(), enum_cap))
        throw budget_error("Constraint::conditional_count: enumeration over cap");
    mpz_class count = 0;
    std::vector<int> full = fixed;
    enumerate_tuples(free_pos.size(), q_, [&](const std::vector<int>& t) {
        for (std::size_t j = 0; j < free_pos.size(); ++j) full[free_pos[j]] = t[j];
        if (lazy_->pred(full)) ++count;
        return true;
    });
    lazy_->cond_cache.emplace(std::move(key), count);
    return count;
}

void Constraint::materialize(long enum_cap) {
    if (has_table_) return;
    if (!fits_cap(q_, domain_.size(), enum_cap))
        throw budget_error("Constraint::materialize: enumeration over cap");
    std::set<std::vector<int>> forb;
    enumerate_tuples(domain_.size(), q_, [&](const std::vector<int>& t) {
        if (lazy_->pred(t)) forb.insert(t);
        return true;
    });
    forbidden_ = std::move(forb);
    has_table_ = true;
    lazy_.reset();
}

Constraint Constraint::normalized(long enum_cap) const {
    Constraint base = *this;
    base.materialize(enum_cap);
    std::vector<std::size_t> order(base.domain_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return base.domain_[a] < base.domain_[b]; });
    std::vector<int> dom(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) dom[i] = base.domain_[order[i]];
    std::set<std::vector<int>> forb;
    std::vector<int> t(order.size());
    for (const auto& tuple : base.forbidden_) {
        for (std::size_t i = 0; i < order.size(); ++i) t[i] = tuple[order[i]];
        forb.insert(t);
    }
    return Constraint::table(std::move(dom), base.q_, std::move(forb));
}

bool constraints_equal(const Constraint& a, const Constraint& b, long enum_cap) {
    if (a.q() != b.q()) return false;
    Constraint na = a.normalized(enum_cap), nb = b.normalized(enum_cap);
    return na.domain() == nb.domain() && na.forbidden() == nb.forbidden();
}

bool violates(const PartialColoring& f, const Constraint& b) {
    if (f.q != b.q()) throw std::invalid_argument("violates: mismatched q");
    std::vector<int> tuple(b.domain().size());
    for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = f.at(b.domain()[i]);
    return b.forbids(tuple);
}

Rat probability(const Constraint& b, long enum_cap) {
    Rat out(b.forbidden_count(enum_cap));
    out /= Rat(ipow_z(b.q(), b.domain().size()));
    out.canonicalize();
    return out;
}

Constraint restrict_constraint(const Constraint& b, const PartialColoring& f) {
    if (f.q != b.q()) throw std::invalid_argument("restrict_constraint: mismatched q");
    const auto& dom = b.domain();
    std::vector<int> fixed(dom.size(), -1);
    std::vector<std::size_t> free_pos;
    std::vector<int> new_dom;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (f.has(dom[i])) {
            fixed[i] = f.at(dom[i]);
        } else {
            free_pos.push_back(i);
            new_dom.push_back(dom[i]);
        }
    }
    if (free_pos.size() == dom.size()) return b;
    if (!b.has_table_) {
        // Keep the lazy backing; the new predicate splices the fixed values in.
        auto core = b.lazy_;
        auto dom_copy = dom;
        Constraint out = Constraint::lazy(
            new_dom, b.q(),
            [core, dom_copy, fixed, free_pos](std::span<const int> phi) {
                std::vector<int> full(dom_copy.size());
                for (std::size_t i = 0; i < dom_copy.size(); ++i) full[i] = fixed[i];
                for (std::size_t j = 0; j < free_pos.size(); ++j) full[free_pos[j]] = phi[j];
                return core->pred(full);
            });
        return out;
    }
    std::set<std::vector<int>> forb;
    std::vector<int> proj(free_pos.size());
    for (const auto& tuple : b.forbidden()) {
        bool match = true;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (fixed[i] >= 0 && tuple[i] != fixed[i]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        for (std::size_t j = 0; j < free_pos.size(); ++j) proj[j] = tuple[free_pos[j]];
        forb.insert(proj);
    }
    return Constraint::table(std::move(new_dom), b.q(), std::move(forb));
}

Rat conditional_probability(const Constraint& b, const PartialColoring& psi,
                            const VertexSet& u, long enum_cap) {
    if (psi.q != b.q()) throw std::invalid_argument("conditional_probability: mismatched q");
    const auto& dom = b.domain();
    std::vector<int> sorted_dom = dom;
    std::sort(sorted_dom.begin(), sorted_dom.end());
    VertexSet inter = set_intersection(sorted_dom, u);
    if (psi.domain() != inter)
        throw std::invalid_argument(
            "conditional_probability: psi must be total exactly on dom(B) & U");
    std::size_t rest = dom.size() - inter.size();
    mpz_class count = b.conditional_count(psi.assign, enum_cap);
    Rat out{count};
    out /= Rat(ipow_z(b.q(), rest));
    out.canonicalize();
    return out;
}

void CSP::validate() const {
    if (q < 1) throw std::invalid_argument("CSP: q < 1");
    if (!valid_vertex_set(universe, universe.empty() ? 0 : universe.back() + 1))
        throw std::invalid_argument("CSP: universe not a sorted id set");
    for (const auto& c : constraints) {
        if (c.q() != q) throw std::invalid_argument("CSP: constraint q mismatch");
        for (int v : c.domain())
            if (!set_contains(universe, v))
                throw std::invalid_argument("CSP: constraint domain outside universe");
    }
}

VertexSet range_universe(int n) {
    VertexSet out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

Rat p_param(const CSP& csp, long enum_cap) {
    Rat best(0);
    for (const auto& c : csp.constraints) best = std::max(best, probability(c, enum_cap));
    return best;
}

std::vector<long> overlap_counts(const CSP& csp) {
    std::map<int, std::vector<int>> at_vertex;
    for (std::size_t i = 0; i < csp.constraints.size(); ++i)
        for (int v : csp.constraints[i].domain()) at_vertex[v].push_back(static_cast<int>(i));
    std::vector<long> out(csp.constraints.size(), 0);
    std::vector<int> stamp(csp.constraints.size(), -1);
    for (std::size_t i = 0; i < csp.constraints.size(); ++i) {
        long count = 0;
        for (int v : csp.constraints[i].domain()) {
            for (int j : at_vertex[v]) {
                if (j != static_cast<int>(i) && stamp[j] != static_cast<int>(i)) {
                    stamp[j] = static_cast<int>(i);
                    ++count;
                }
            }
        }
        out[i] = count;
    }
    return out;
}

long d_param(const CSP& csp) {
    long best = 0;
    for (long c : overlap_counts(csp)) best = std::max(best, c);
    return best;
}

Graph dependency_graph(const CSP& csp) {
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    std::vector<std::pair<int, int>> edges;
    for (const auto& c : csp.constraints) {
        const auto& dom = c.domain();
        for (std::size_t i = 0; i < dom.size(); ++i)
            for (std::size_t j = i + 1; j < dom.size(); ++j)
                edges.emplace_back(std::min(dom[i], dom[j]), std::max(dom[i], dom[j]));
    }
    return Graph(bound, std::move(edges));
}

CSP restrict_csp(const CSP& csp, const PartialColoring& f) {
    long d_before = d_param(csp);
    CSP out;
    out.q = csp.q;
    out.universe = set_difference(csp.universe, f.domain());
    out.constraints.reserve(csp.constraints.size());
    for (const auto& c : csp.constraints) out.constraints.push_back(restrict_constraint(c, f));
    long d_after = d_param(out);
    if (d_after > d_before)
        throw std::logic_error("restrict_csp: dependency degree increased (bug)");
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Backtracking solver for one component. Variables are local indices
// 0..n-1 in ascending id order; finds the lexicographically least solution.
class ComponentSolver {
  public:
    ComponentSolver(int q, int nvars, std::vector<const Constraint*> cons,
                    std::vector<std::vector<int>> cons_vars)
        : q_(q),
          nvars_(nvars),
          cons_(std::move(cons)),
          cons_vars_(std::move(cons_vars)),
          color_(nvars, -1),
          ban_(static_cast<std::size_t>(nvars) * q, 0),
          unassigned_(cons_.size()),
          incident_(nvars) {
        for (std::size_t k = 0; k < cons_.size(); ++k) {
            unassigned_[k] = static_cast<int>(cons_vars_[k].size());
            for (int v : cons_vars_[k]) incident_[v].push_back(static_cast<int>(k));
        }
    }

    bool solve(std::vector<int>& out) {
        if (!assign_from(0)) return false;
        out = color_;
        return true;
    }

  private:
    int q_;
    int nvars_;
    std::vector<const Constraint*> cons_;
    std::vector<std::vector<int>> cons_vars_;  // local var index per domain position
    std::vector<int> color_;
    std::vector<int> ban_;  // nvars x q counters
    std::vector<int> unassigned_;
    std::vector<std::vector<int>> incident_;

    int& ban_at(int v, int c) { return ban_[static_cast<std::size_t>(v) * q_ + c]; }

    bool constraint_violated(int k) const {
        thread_local std::vector<int> tuple;
        tuple.resize(cons_vars_[k].size());
        for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = color_[cons_vars_[k][i]];
        return cons_[k]->forbids(tuple);
    }

    // Colors for the single free variable of constraint k that would violate
    // it given the current partial assignment.
    void forced_bans(int k, int free_var, std::size_t free_pos, std::vector<std::pair<int, int>>& bans) {
        thread_local std::vector<int> tuple;
        tuple.resize(cons_vars_[k].size());
        for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = color_[cons_vars_[k][i]];
        for (int c = 0; c < q_; ++c) {
            tuple[free_pos] = c;
            if (cons_[k]->forbids(tuple)) bans.emplace_back(free_var, c);
        }
    }

    bool assign_from(int v) {
        if (v == nvars_) return true;
        for (int c = 0; c < q_; ++c) {
            if (ban_at(v, c) > 0) continue;
            color_[v] = c;
            std::vector<std::pair<int, int>> bans;
            bool ok = true;
            int processed = 0;
            for (int k : incident_[v]) {
                --unassigned_[k];
                ++processed;
                if (unassigned_[k] == 0) {
                    if (constraint_violated(k)) {
                        ok = false;
                        break;
                    }
                } else if (unassigned_[k] == 1) {
                    int free_var = -1;
                    std::size_t free_pos = 0;
                    for (std::size_t i = 0; i < cons_vars_[k].size(); ++i) {
                        if (color_[cons_vars_[k][i]] < 0) {
                            free_var = cons_vars_[k][i];
                            free_pos = i;
                            break;
                        }
                    }
                    forced_bans(k, free_var, free_pos, bans);
                }
            }
            if (ok) {
                bool dead = false;
                for (const auto& [w, bc] : bans) ++ban_at(w, bc);
                for (const auto& [w, bc] : bans) {
                    (void)bc;
                    bool any = false;
                    for (int cc = 0; cc < q_; ++cc)
                        if (ban_at(w, cc) == 0) {
                            any = true;
                            break;
                        }
                    if (!any) {
                        dead = true;
                        break;
                    }
                }
                if (!dead && assign_from(v + 1)) return true;
                for (const auto& [w, bc] : bans) --ban_at(w, bc);
            }
            // Undo unassigned counters for the constraints we touched.
            for (int k : incident_[v]) {
                if (processed == 0) break;
                ++unassigned_[k];
                --processed;
            }
            color_[v] = -1;
        }
        return false;
    }
};

}  // namespace

std::optional<PartialColoring> brute_force_solve(const CSP& csp, const BruteForceOptions& opts) {
    csp.validate();
    for (const auto& c : csp.constraints) {
        if (c.domain().empty()) {
            if (c.forbids({})) return std::nullopt;  // {()}: violated by everything
        }
    }
    // Group variables into components of the dependency structure.
    std::vector<int> pos_of;
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    pos_of.assign(bound, -1);
    for (std::size_t i = 0; i < csp.universe.size(); ++i) pos_of[csp.universe[i]] = static_cast<int>(i);
    UnionFind uf(csp.universe.size());
    for (const auto& c : csp.constraints) {
        const auto& dom = c.domain();
        for (std::size_t i = 1; i < dom.size(); ++i) uf.unite(pos_of[dom[0]], pos_of[dom[i]]);
    }
    std::map<int, std::vector<int>> comp_vars;  // root -> universe positions
    for (std::size_t i = 0; i < csp.universe.size(); ++i)
        comp_vars[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::map<int, std::vector<int>> comp_cons;  // root -> constraint indices
    for (std::size_t k = 0; k < csp.constraints.size(); ++k) {
        const auto& dom = csp.constraints[k].domain();
        if (dom.empty()) continue;
        comp_cons[uf.find(pos_of[dom[0]])].push_back(static_cast<int>(k));
    }
    for (const auto& [root, vars] : comp_vars) {
        if (static_cast<long>(vars.size()) > opts.component_budget)
            throw budget_error("brute_force_solve: component of " + std::to_string(vars.size()) +
                               " variables exceeds budget " + std::to_string(opts.component_budget));
    }

    std::vector<const std::vector<int>*> roots_vars;
    std::vector<std::vector<int>> roots_cons;
    for (const auto& [root, vars] : comp_vars) {
        roots_vars.push_back(&vars);
        auto it = comp_cons.find(root);
        roots_cons.push_back(it == comp_cons.end() ? std::vector<int>{} : it->second);
    }

    std::vector<std::optional<std::vector<int>>> results(roots_vars.size());
    std::vector<std::exception_ptr> errors(roots_vars.size());
    parallel_for(
        roots_vars.size(),
        [&](std::size_t ci) {
            try {
                const auto& vars = *roots_vars[ci];
                std::vector<int> local_of_pos(csp.universe.size(), -1);
                for (std::size_t i = 0; i < vars.size(); ++i) local_of_pos[vars[i]] = static_cast<int>(i);
                std::vector<const Constraint*> cons;
                std::vector<std::vector<int>> cons_vars;
                for (int k : roots_cons[ci]) {
                    const auto& c = csp.constraints[k];
                    cons.push_back(&c);
                    std::vector<int> locs;
                    locs.reserve(c.domain().size());
                    for (int vid : c.domain()) locs.push_back(local_of_pos[pos_of[vid]]);
                    cons_vars.push_back(std::move(locs));
                }
                ComponentSolver solver(csp.q, static_cast<int>(vars.size()), std::move(cons),
                                       std::move(cons_vars));
                std::vector<int> colors;
                if (solver.solve(colors))
                    results[ci] = std::move(colors);
                else
                    results[ci] = std::nullopt;
            } catch (...) {
                errors[ci] = std::current_exception();
            }
        },
        opts.threads);
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    PartialColoring out(csp.q);
    for (std::size_t ci = 0; ci < roots_vars.size(); ++ci) {
        if (!results[ci]) return std::nullopt;
        const auto& vars = *roots_vars[ci];
        for (std::size_t i = 0; i < vars.size(); ++i)
            out.set(csp.universe[vars[i]], (*results[ci])[i]);
    }
    return out;
}

}  // namespace shatter
