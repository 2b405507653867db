#include "shatter/lll.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "shatter/util.hpp"

namespace shatter {

std::string LLLCondition::name() const {
    switch (kind) {
        case Kind::Classic: return "classic";
        case Kind::Shatter: return "shatter(" + std::to_string(s) + ")";
        case Kind::Separation: return "separation(" + std::to_string(s) + ")";
        case Kind::Polynomial: return "polynomial";
    }
    return "?";
}

ConditionReport check_condition(const CSP& csp, const LLLCondition& cond,
                                const NumericConfig& numeric) {
    csp.validate();
    ConditionReport rep;
    rep.p = p_param(csp);
    rep.d = d_param(csp);
    switch (cond.kind) {
        case LLLCondition::Kind::Classic:
            rep.exponent = 1;
            rep.rhs_scale = Rat(1);
            rep.rhs_e_exponent = -1;
            break;
        case LLLCondition::Kind::Shatter:
            if (cond.s < 0) throw std::invalid_argument("check_condition: negative s");
            rep.exponent = cond.s;
            rep.rhs_scale = Rat(1);
            rep.rhs_e_exponent = -cond.s;
            break;
        case LLLCondition::Kind::Separation:
            if (cond.s < 0) throw std::invalid_argument("check_condition: negative s");
            rep.exponent = cond.s + 1;
            rep.rhs_scale = Rat(1);
            rep.rhs_e_exponent = -(cond.s + 1);
            break;
        case LLLCondition::Kind::Polynomial:
            rep.exponent = 8;
            rep.rhs_scale = make_rat(1, 32768);  // 2^-15
            rep.rhs_e_exponent = 0;
            break;
    }
    rep.lhs = rep.p * rat_pow(Rat(rep.d + 1), rep.exponent);
    rep.lhs.canonicalize();
    Cmp c = compare_rat_e_power(rep.lhs, rep.rhs_e_exponent, rep.rhs_scale, numeric,
                                &rep.bits_used);
    rep.tie_possible = (rep.rhs_e_exponent == 0) || rep.lhs == 0;
    switch (c) {
        case Cmp::Less: rep.status = ConditionStatus::HoldsStrictly; break;
        case Cmp::Equal: rep.status = ConditionStatus::Holds; break;
        case Cmp::Greater: rep.status = ConditionStatus::Fails; break;
    }
    rep.lhs_approx = rat_to_double(rep.lhs);
    rep.rhs_approx = approx_e_power(rep.rhs_e_exponent, rep.rhs_scale);
    if (!rep.tie_possible)
        rep.note = "rhs irrational; equality impossible for rational nonzero lhs";
    return rep;
}

Graph class_conflict_graph(const FinitePartition& partition, const CSP& csp) {
    partition.validate(csp.universe);
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    std::vector<int> class_of(bound, -1);
    for (std::size_t i = 0; i < partition.classes.size(); ++i)
        for (int v : partition.classes[i]) class_of[v] = static_cast<int>(i);
    std::set<std::pair<int, int>> edges;
    std::vector<int> met;
    for (const auto& c : csp.constraints) {
        met.clear();
        for (int v : c.domain()) met.push_back(class_of[v]);
        std::sort(met.begin(), met.end());
        met.erase(std::unique(met.begin(), met.end()), met.end());
        for (std::size_t i = 0; i < met.size(); ++i)
            for (std::size_t j = i + 1; j < met.size(); ++j) edges.insert({met[i], met[j]});
    }
    return Graph(static_cast<int>(partition.classes.size()),
                 std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

RoundSchedule greedy_schedule(const Graph& conflict, const FinitePartition& partition,
                              const CSP& csp, long s) {
    long width = shattering_width(partition, csp);
    if (width > s)
        throw std::invalid_argument("greedy_schedule: s=" + std::to_string(s) +
                                    " below actual shattering width " + std::to_string(width));
    if (conflict.n() != static_cast<int>(partition.classes.size()))
        throw std::invalid_argument("greedy_schedule: conflict graph / partition mismatch");
    RoundSchedule out;
    out.class_round.assign(partition.classes.size(), -1);
    int rounds = 0;
    for (int c = 0; c < conflict.n(); ++c) {
        std::set<int> used;
        for (int nb : conflict.neighbors(c))
            if (out.class_round[nb] >= 0) used.insert(out.class_round[nb]);
        int color = 0;
        while (used.count(color)) ++color;
        out.class_round[c] = color;
        rounds = std::max(rounds, color + 1);
    }
    out.rounds.assign(rounds, {});
    out.round_classes.assign(rounds, {});
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        int r = out.class_round[c];
        out.round_classes[r].push_back(static_cast<int>(c));
        for (int v : partition.classes[c]) out.rounds[r].push_back(v);
    }
    for (auto& u : out.rounds) std::sort(u.begin(), u.end());
    return out;
}

Constraint threshold_constraint(const Constraint& b, const VertexSet& u, long s_b, long d,
                                const NumericConfig& numeric, long conditioning_cap) {
    if (s_b < 1) throw std::invalid_argument("threshold_constraint: s_B must be >= 1");
    if (d < 0) throw std::invalid_argument("threshold_constraint: negative d");
    const auto& dom = b.domain();
    std::vector<int> inter;  // dom(B) & U in B's domain order
    std::vector<std::size_t> inter_pos;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (set_contains(u, dom[i])) {
            inter.push_back(dom[i]);
            inter_pos.push_back(i);
        }
    }
    if (inter.empty())
        throw std::invalid_argument("threshold_constraint: dom(B) does not meet U");
    long t = s_b - 1;
    Rat dpow = rat_pow(Rat(d + 1), t);
    std::size_t rest = dom.size() - inter.size();
    mpz_class rest_total;
    mpz_ui_pow_ui(rest_total.get_mpz_t(), static_cast<unsigned long>(b.q()),
                  static_cast<unsigned long>(rest));
    // Forbidden iff P[B|psi] >= (e(d+1))^{-t}; for t >= 1 the threshold is
    // irrational and P rational, so >= coincides with >.
    auto over_threshold = [&](const mpz_class& count) {
        if (count == 0) return false;
        Rat p(count);
        p /= Rat(rest_total);
        p.canonicalize();
        if (t == 0) return p >= 1;
        Rat lhs = p * dpow;
        lhs.canonicalize();
        return compare_rat_e_power(lhs, -t, Rat(1), numeric) == Cmp::Greater;
    };

    std::set<std::vector<int>> forbidden;
    if (!b.is_lazy()) {
        // Only projections realized by some forbidden tuple can reach the
        // threshold; group and count them.
        std::map<std::vector<int>, mpz_class> counts;
        std::vector<int> proj(inter.size());
        for (const auto& tuple : b.forbidden()) {
            for (std::size_t j = 0; j < inter_pos.size(); ++j) proj[j] = tuple[inter_pos[j]];
            ++counts[proj];
        }
        for (const auto& [psi, count] : counts)
            if (over_threshold(count)) forbidden.insert(psi);
    } else {
        double total = 1;
        for (std::size_t i = 0; i < inter.size(); ++i) {
            total *= b.q();
            if (total > static_cast<double>(conditioning_cap))
                throw budget_error("threshold_constraint: conditioning enumeration over cap");
        }
        std::vector<int> psi(inter.size(), 0);
        std::map<int, int> partial;
        for (;;) {
            partial.clear();
            for (std::size_t j = 0; j < inter.size(); ++j) partial[inter[j]] = psi[j];
            if (over_threshold(b.conditional_count(partial, conditioning_cap)))
                forbidden.insert(psi);
            std::size_t i = psi.size();
            while (i > 0) {
                if (++psi[i - 1] < b.q()) break;
                psi[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
    }
    return Constraint::table(std::move(inter), b.q(), std::move(forbidden));
}

bool markov_bound_holds(const Rat& p_star, const Rat& p_b, long s_b, long d,
                        const NumericConfig& numeric) {
    long t = s_b - 1;
    if (t < 0) throw std::invalid_argument("markov_bound_holds: s_B must be >= 1");
    Rat scale = p_b * rat_pow(Rat(d + 1), t);
    scale.canonicalize();
    if (t == 0) return p_star <= scale;
    if (p_star == 0) return true;
    if (scale == 0) return false;
    return compare_rat_e_power(p_star, t, scale, numeric) != Cmp::Greater;
}

namespace {

// Strict bound P (d+1)^k < e^{-k}; exact when k = 0.
bool strict_bound_holds(const Rat& p, long d, long k, const NumericConfig& numeric) {
    Rat lhs = p * rat_pow(Rat(d + 1), k);
    lhs.canonicalize();
    if (k == 0) return lhs < 1;
    return compare_rat_e_power(lhs, -k, Rat(1), numeric) == Cmp::Less;
}

}  // namespace

PartialColoring shattering_step(const CSP& csp, const VertexSet& u,
                                const std::vector<long>& s_of, const StepOptions& opts,
                                CSP* residual_out, StepAudit* audit_out) {
    csp.validate();
    if (!is_subset(u, csp.universe))
        throw std::invalid_argument("shattering_step: U must lie inside the universe");
    if (s_of.size() != csp.constraints.size())
        throw std::invalid_argument("shattering_step: s function size mismatch");
    long d = d_param(csp);
    std::vector<int> eta(csp.constraints.size(), 0);
    std::vector<Rat> p_entry(csp.constraints.size());
    for (std::size_t i = 0; i < csp.constraints.size(); ++i) {
        const auto& dom = csp.constraints[i].domain();
        for (int v : dom)
            if (set_contains(u, v)) {
                eta[i] = 1;
                break;
            }
        if (s_of[i] < 0) throw std::invalid_argument("shattering_step: negative s(B)");
        if (eta[i] && s_of[i] < 1)
            throw std::invalid_argument("shattering_step: s(B) must be >= 1 on constraints meeting U");
        p_entry[i] = probability(csp.constraints[i], opts.conditioning_cap);
        if (!strict_bound_holds(p_entry[i], d, s_of[i], opts.numeric))
            throw std::invalid_argument(
                "shattering_step: entry condition P[B](d+1)^s < e^-s fails at constraint " +
                std::to_string(i));
    }

    // Components of G_B[U] must respect the locality budget.
    {
        std::vector<int> pos(csp.universe.empty() ? 0 : csp.universe.back() + 1, -1);
        for (std::size_t i = 0; i < u.size(); ++i) pos[u[i]] = static_cast<int>(i);
        std::vector<int> parent(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& c : csp.constraints) {
            int first = -1;
            for (int v : c.domain()) {
                if (v >= 0 && v < static_cast<int>(pos.size()) && pos[v] >= 0) {
                    if (first < 0)
                        first = pos[v];
                    else {
                        int a = find(first), b = find(pos[v]);
                        if (a != b) parent[std::max(a, b)] = std::min(a, b);
                    }
                }
            }
        }
        std::map<int, long> size_of;
        for (std::size_t i = 0; i < u.size(); ++i) ++size_of[find(static_cast<int>(i))];
        for (const auto& [root, size] : size_of)
            if (size > opts.budget)
                throw budget_error("shattering_step: component of G_B[U] has " +
                                   std::to_string(size) + " vertices, budget " +
                                   std::to_string(opts.budget));
    }

    CSP thresholded;
    thresholded.q = csp.q;
    thresholded.universe = u;
    for (std::size_t i = 0; i < csp.constraints.size(); ++i) {
        if (!eta[i]) continue;
        thresholded.constraints.push_back(threshold_constraint(
            csp.constraints[i], u, s_of[i], d, opts.numeric, opts.conditioning_cap));
    }
    BruteForceOptions bf;
    bf.component_budget = opts.budget;
    bf.threads = opts.threads;
    auto f = brute_force_solve(thresholded, bf);
    if (!f)
        throw std::logic_error(
            "shattering_step: thresholded CSP unsatisfiable; contradicts the LLL (bug)");

    CSP residual = restrict_csp(csp, *f);
    long d_after = d_param(residual);
    for (std::size_t i = 0; i < residual.constraints.size(); ++i) {
        Rat p_res = eta[i] ? probability(residual.constraints[i], opts.conditioning_cap)
                           : p_entry[i];
        if (!strict_bound_holds(p_res, d_after, s_of[i] - eta[i], opts.numeric))
            throw std::logic_error("shattering_step: audit inequality failed at constraint " +
                                   std::to_string(i) + " (bug)");
    }
    if (audit_out) {
        audit_out->eta = eta;
        audit_out->d_before = d;
        audit_out->d_after = d_after;
    }
    if (residual_out) *residual_out = std::move(residual);
    return *f;
}

PartialColoring shattering_solve(const CSP& csp, const FinitePartition& partition, long s,
                                 const SolveOptions& opts, ShatteringReport* report) {
    csp.validate();
    partition.validate(csp.universe);
    ShatteringReport local;
    ShatteringReport& rep = report ? *report : local;
    rep.entry = check_condition(csp, LLLCondition::shatter(s), opts.numeric);
    if (!rep.entry.holds())
        throw std::invalid_argument("shattering_solve: shatter(" + std::to_string(s) +
                                    ") condition fails: " + rat_to_string(rep.entry.lhs) + " > e^" +
                                    std::to_string(rep.entry.rhs_e_exponent));
    rep.width = shattering_width(partition, csp);
    if (rep.width > s)
        throw std::invalid_argument("shattering_solve: shattering width " +
                                    std::to_string(rep.width) + " exceeds s=" + std::to_string(s));
    for (const auto& cls : partition.classes)
        if (static_cast<long>(cls.size()) > opts.budget)
            throw budget_error("shattering_solve: class of size " + std::to_string(cls.size()) +
                               " exceeds budget " + std::to_string(opts.budget));

    Graph conflict = class_conflict_graph(partition, csp);
    RoundSchedule schedule = greedy_schedule(conflict, partition, csp, s);
    rep.rounds = static_cast<long>(schedule.rounds.size());
    for (const auto& rc : schedule.round_classes)
        rep.round_class_counts.push_back(static_cast<long>(rc.size()));

    const std::size_t m = csp.constraints.size();
    std::vector<long> t_count(m, 0);
    CSP residual = csp;
    PartialColoring solution(csp.q);
    StepOptions step_opts;
    step_opts.budget = opts.budget;
    step_opts.conditioning_cap = opts.conditioning_cap;
    step_opts.numeric = opts.numeric;
    step_opts.threads = opts.threads;
    for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
        const VertexSet& u = schedule.rounds[r];
        std::vector<long> s_of(m);
        for (std::size_t i = 0; i < m; ++i) s_of[i] = s - t_count[i];
        StepAudit audit;
        CSP next;
        PartialColoring f = shattering_step(residual, u, s_of, step_opts, &next, &audit);
        if (opts.keep_trace) {
            RoundTrace tr;
            tr.round = static_cast<int>(r);
            tr.class_count = static_cast<long>(schedule.round_classes[r].size());
            tr.u_size = static_cast<long>(u.size());
            tr.s_before = s_of;
            tr.eta = audit.eta;
            rep.trace.push_back(std::move(tr));
        }
        for (std::size_t i = 0; i < m; ++i) {
            t_count[i] += audit.eta[i];
            if (t_count[i] > s)
                throw std::logic_error("shattering_solve: t_n(B) exceeded s (bug)");
        }
        solution = PartialColoring::join(solution, f);
        residual = std::move(next);
    }
    rep.t_final = t_count;

    if (solution.domain() != csp.universe)
        throw std::logic_error("shattering_solve: output not total (bug)");
    // Final residual dichotomy: every constraint must have collapsed to the
    // empty always-satisfied constraint.
    for (std::size_t i = 0; i < m; ++i) {
        const Constraint& res = residual.constraints[i];
        if (!res.domain().empty() || res.forbids({}))
            throw std::logic_error("shattering_solve: final residual not empty (bug)");
        if (violates(solution, csp.constraints[i]))
            throw std::logic_error("shattering_solve: output violates a constraint (bug)");
    }
    rep.verified = true;
    return solution;
}

MoserTardosResult moser_tardos(const CSP& csp, std::uint64_t seed, long max_resamples) {
    csp.validate();
    MoserTardosResult out;
    if (max_resamples < 0)
        max_resamples = 50 * static_cast<long>(csp.constraints.size()) + 1000;
    out.max_resamples = max_resamples;
    for (const auto& c : csp.constraints) {
        if (c.domain().empty() && c.forbids({})) {
            out.diagnostics = "always-violated empty-domain constraint";
            return out;
        }
    }
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    std::vector<int> pos(bound, -1);
    for (std::size_t i = 0; i < csp.universe.size(); ++i) pos[csp.universe[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> touching(csp.universe.size());
    for (std::size_t k = 0; k < csp.constraints.size(); ++k)
        for (int v : csp.constraints[k].domain()) touching[pos[v]].push_back(static_cast<int>(k));

    Rng rng(seed);
    std::vector<int> color(csp.universe.size());
    for (auto& c : color) c = rng.below_int(csp.q);

    auto violated = [&](std::size_t k) {
        const auto& dom = csp.constraints[k].domain();
        thread_local std::vector<int> tuple;
        tuple.resize(dom.size());
        for (std::size_t i = 0; i < dom.size(); ++i) tuple[i] = color[pos[dom[i]]];
        return csp.constraints[k].forbids(tuple);
    };

    std::set<int> bad;
    for (std::size_t k = 0; k < csp.constraints.size(); ++k)
        if (violated(k)) bad.insert(static_cast<int>(k));

    while (!bad.empty() && out.resamples < max_resamples) {
        int k = *bad.begin();
        const auto& dom = csp.constraints[k].domain();
        for (int v : dom) color[pos[v]] = rng.below_int(csp.q);
        ++out.resamples;
        std::set<int> recheck;
        recheck.insert(k);
        for (int v : dom)
            for (int j : touching[pos[v]]) recheck.insert(j);
        for (int j : recheck) {
            if (violated(j))
                bad.insert(j);
            else
                bad.erase(j);
        }
    }
    if (bad.empty()) {
        PartialColoring f(csp.q);
        for (std::size_t i = 0; i < csp.universe.size(); ++i) f.set(csp.universe[i], color[i]);
        for (const auto& c : csp.constraints)
            if (violates(f, c)) throw std::logic_error("moser_tardos: verification failed (bug)");
        out.solution = std::move(f);
    } else {
        out.diagnostics = "resample budget exhausted with " + std::to_string(bad.size()) +
                          " violated constraints";
    }
    return out;
}

}  // namespace shatter
