// Command-line front end: graph/CSP/action ingestion, solver invocation,
// verification, and JSON report emission. Exit codes: 0 solved/ok,
// 1 unsatisfiable or legitimate failure, 2 input error, 3 condition violated.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "shatter/apps.hpp"
#include "shatter/bridge.hpp"
#include "shatter/json_io.hpp"
#include "shatter/lll.hpp"
#include "shatter/local.hpp"
#include "shatter/util.hpp"

using namespace shatter;

namespace {

struct CommonOpts {
    std::string out;
    std::uint64_t seed = 1;
    unsigned precision_start = 64;
    unsigned precision_cap = 1 << 14;
    unsigned threads = 0;
    bool timings = false;
};

NumericConfig numeric_of(const CommonOpts& c) {
    NumericConfig out;
    out.start_bits = c.precision_start;
    out.cap_bits = c.precision_cap;
    return out;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "write the JSON report here (default: stdout)");
    cmd->add_option("--seed", c.seed, "master seed; all randomness derives from it");
    cmd->add_option("--precision-start", c.precision_start, "interval start precision (bits)");
    cmd->add_option("--precision-cap", c.precision_cap, "interval precision cap (bits)");
    cmd->add_option("--threads", c.threads, "worker cap (0 = hardware)");
    cmd->add_flag("--timings", c.timings, "include wall times (breaks byte-identical output)");
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void emit(const CommonOpts& c, json report, const Timer& timer) {
    report["seed"] = c.seed;
    report["precision_bits"] = {{"start", c.precision_start}, {"cap", c.precision_cap}};
    if (c.timings) report["wall_ms"] = timer.ms();
    if (c.out.empty())
        std::cout << report.dump(2) << "\n";
    else
        write_json_file(c.out, report);
}

json rat_json(const Rat& r) {
    return json{{"exact", rat_to_string(r)}, {"approx", rat_to_double(r)}};
}

json condition_json(const ConditionReport& rep, const LLLCondition& cond) {
    const char* status = rep.status == ConditionStatus::Fails
                             ? "fails"
                             : (rep.status == ConditionStatus::Holds ? "holds" : "holds_strictly");
    json rhs{{"e_exponent", rep.rhs_e_exponent},
             {"scale", rat_to_string(rep.rhs_scale)},
             {"approx", rep.rhs_approx}};
    return json{{"condition", cond.name()},   {"status", status},
                {"p", rat_json(rep.p)},       {"d", rep.d},
                {"lhs", rat_json(rep.lhs)},   {"rhs", rhs},
                {"bits_used", rep.bits_used}, {"tie_possible", rep.tie_possible},
                {"note", rep.note}};
}

LLLCondition condition_of(const std::string& kind, long s) {
    if (kind == "classic") return LLLCondition::classic();
    if (kind == "shatter") return LLLCondition::shatter(s);
    if (kind == "separation") return LLLCondition::separation(s);
    if (kind == "polynomial") return LLLCondition::polynomial();
    throw std::invalid_argument("unknown condition kind: " + kind);
}

LocalAlgorithm algorithm_of(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    long arg = colon == std::string::npos ? -1 : std::stol(spec.substr(colon + 1));
    if (name == "identity") return alg_identity();
    if (name == "constant") return alg_constant(arg < 0 ? 0 : arg);
    if (name == "label-mod") return alg_label_mod(arg);
    if (name == "greedy-by-id") return alg_greedy_by_id();
    if (name == "luby-mis") return alg_luby_mis();
    if (name == "sinkless-trial") return alg_sinkless_trial();
    throw std::invalid_argument("unknown algorithm: " + spec);
}

LCLProblem lcl_of(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    long arg = colon == std::string::npos ? -1 : std::stol(spec.substr(colon + 1));
    if (name == "always-true") return lcl_always_true();
    if (name == "proper") return lcl_proper_coloring(arg);
    if (name == "distinct") return lcl_distinct_labels();
    if (name == "mis") return lcl_mis();
    if (name == "sinkless") return lcl_sinkless();
    throw std::invalid_argument("unknown LCL problem: " + spec);
}

json solution_json(const PartialColoring& f, int bound, bool verified) {
    json out = coloring_to_json(f, bound);
    out["verified"] = verified;
    return out;
}

// ---- gen ----------------------------------------------------------------

struct GenOpts {
    CommonOpts common;
    std::string kind = "path";
    int n = 10;
    int grid_w = 0, grid_h = 0;
    int degree = 3;
    long witness_block = 0;
    std::string witness_out, partition_out, csp_out;
    int coloring_q = 0;
    bool sinkless = false;
};

int run_gen(const GenOpts& o) {
    Timer timer;
    Graph g;
    if (o.kind == "path")
        g = path_graph(o.n);
    else if (o.kind == "cycle")
        g = cycle_graph(o.n);
    else if (o.kind == "grid")
        g = grid_graph(o.grid_w, o.grid_h);
    else if (o.kind == "regular")
        g = random_regular(o.n, o.degree, o.common.seed);
    else
        throw std::invalid_argument("unknown graph kind: " + o.kind);

    json report{{"command", "gen"}, {"kind", o.kind}, {"n", g.n()}, {"m", g.m()}};
    json graph_json_value = graph_to_json(g);
    report["graph"] = graph_json_value;

    std::optional<SeparationWitness> witness;
    if (o.witness_block > 0) {
        witness = o.kind == "grid" ? grid_separation(g, o.grid_w, o.grid_h, o.witness_block)
                                   : interval_separation(g, o.witness_block);
        if (!o.witness_out.empty()) write_json_file(o.witness_out, witness_to_json(*witness));
        report["witness"] = {{"parts", witness->parts.size()}, {"budget", witness->budget}};
        if (!o.partition_out.empty()) {
            auto partition = partition_from_separation(g, *witness);
            write_json_file(o.partition_out, partition_to_json(partition));
            report["partition_classes"] = partition.classes.size();
        }
    }
    if (!o.csp_out.empty()) {
        if (o.sinkless) {
            auto sink = sinkless_orientation_csp(g);
            write_json_file(o.csp_out, csp_to_json(sink.csp));
            report["csp"] = {{"type", "sinkless"}, {"constraints", sink.csp.constraints.size()}};
        } else if (o.coloring_q > 0) {
            auto csp = proper_coloring_csp(g, o.coloring_q);
            write_json_file(o.csp_out, csp_to_json(csp));
            report["csp"] = {{"type", "proper-coloring"},
                             {"q", o.coloring_q},
                             {"constraints", csp.constraints.size()}};
        } else {
            throw std::invalid_argument("gen: --csp-out needs --coloring-q or --sinkless");
        }
    }
    emit(o.common, report, timer);
    return 0;
}

// ---- check ---------------------------------------------------------------

struct CheckOpts {
    CommonOpts common;
    std::string input;
    std::string kind = "classic";
    long s = 1;
};

int run_check(const CheckOpts& o) {
    Timer timer;
    CSP csp = csp_from_json(read_json_file(o.input));
    auto cond = condition_of(o.kind, o.s);
    auto rep = check_condition(csp, cond, numeric_of(o.common));
    json report{{"command", "check"},
                {"input", o.input},
                {"constraints", csp.constraints.size()},
                {"result", condition_json(rep, cond)}};
    emit(o.common, report, timer);
    return 0;
}

// ---- solve ---------------------------------------------------------------

struct SolveOpts {
    CommonOpts common;
    std::string input;
    std::string solver = "brute";
    std::string partition_file, witness_file;
    long s = -1;
    long budget = 20;
    long max_resamples = -1;
    std::string solution_out;
};

int run_solve(const SolveOpts& o) {
    Timer timer;
    CSP csp = csp_from_json(read_json_file(o.input));
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    json report{{"command", "solve"}, {"solver", o.solver}, {"input", o.input}};

    auto verify_all = [&](const PartialColoring& f) {
        for (const auto& c : csp.constraints)
            if (violates(f, c)) return false;
        return true;
    };
    auto finish_solved = [&](const PartialColoring& f) {
        bool ok = verify_all(f);
        report["solution"] = solution_json(f, bound, ok);
        if (!o.solution_out.empty()) write_json_file(o.solution_out, coloring_to_json(f, bound));
        report["verdict"] = ok ? "solved" : "verification-failed";
        emit(o.common, report, timer);
        return ok ? 0 : 1;
    };

    if (o.solver == "brute") {
        BruteForceOptions opts;
        opts.component_budget = o.budget;
        opts.threads = o.common.threads;
        auto f = brute_force_solve(csp, opts);
        if (!f) {
            report["verdict"] = "unsatisfiable";
            emit(o.common, report, timer);
            return 1;
        }
        return finish_solved(*f);
    }
    if (o.solver == "moser-tardos") {
        auto res = moser_tardos(csp, o.common.seed, o.max_resamples);
        report["resamples"] = res.resamples;
        report["max_resamples"] = res.max_resamples;
        if (!res.solution) {
            report["verdict"] = "failed";
            report["diagnostics"] = res.diagnostics;
            emit(o.common, report, timer);
            return 1;
        }
        return finish_solved(*res.solution);
    }
    if (o.solver == "shattering") {
        FinitePartition partition;
        if (!o.partition_file.empty()) {
            partition = partition_from_json(read_json_file(o.partition_file));
        } else if (!o.witness_file.empty()) {
            auto witness = witness_from_json(read_json_file(o.witness_file));
            partition = partition_from_separation(dependency_graph(csp), witness);
        } else {
            throw std::invalid_argument("solve --solver shattering needs --partition or --witness");
        }
        long width = shattering_width(partition, csp);
        long s = o.s >= 0 ? o.s : width;
        auto cond = check_condition(csp, LLLCondition::shatter(s), numeric_of(o.common));
        report["condition"] = condition_json(cond, LLLCondition::shatter(s));
        report["width"] = width;
        report["s"] = s;
        if (!cond.holds() || width > s) {
            report["verdict"] = "condition-violated";
            emit(o.common, report, timer);
            return 3;
        }
        shatter::SolveOptions opts;
        opts.budget = o.budget;
        opts.numeric = numeric_of(o.common);
        opts.threads = o.common.threads;
        ShatteringReport srep;
        auto f = shattering_solve(csp, partition, s, opts, &srep);
        report["rounds"] = srep.rounds;
        report["round_class_counts"] = srep.round_class_counts;
        return finish_solved(f);
    }
    throw std::invalid_argument("unknown solver: " + o.solver);
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
    CommonOpts common;
    std::string graph_file, alg = "identity", lcl = "always-true";
    std::string mode = "det";
    std::string labels_file;
    int rounds = 0;
    long ell = 2;
    long trials = 100;
};

int run_simulate(const SimulateOpts& o) {
    Timer timer;
    StructuredGraph sg = structured_from_json(read_json_file(o.graph_file));
    auto alg = algorithm_of(o.alg);
    auto problem = lcl_of(o.lcl);
    json report{{"command", "simulate"}, {"graph", o.graph_file}, {"algorithm", alg.name},
                {"lcl", problem.name},   {"T", o.rounds},         {"mode", o.mode}};
    if (o.mode == "det") {
        std::vector<int> id(sg.g.n());
        std::iota(id.begin(), id.end(), 0);
        Rng rng(o.common.seed);
        for (std::size_t i = id.size(); i > 1; --i) std::swap(id[i - 1], id[rng.below(i)]);
        auto out = run_deterministic(alg, sg, id, o.rounds);
        auto check = check_lcl(problem, sg, out);
        report["output"] = labeling_to_json(out);
        report["success"] = check.ok;
        report["violations"] = check.violations;
        emit(o.common, report, timer);
        return check.ok ? 0 : 1;
    }
    if (o.mode == "random") {
        auto rep = run_randomized(alg, problem, sg, o.ell, o.rounds, o.trials, o.common.seed);
        report["trials"] = rep.trials;
        report["successes"] = rep.successes;
        report["rate"] = rep.rate;
        report["ci95"] = {rep.ci_low, rep.ci_high};
        report["meets_1_minus_1_over_n"] = rep.meets_one_minus_one_over_n;
        emit(o.common, report, timer);
        return 0;
    }
    if (o.mode == "labels") {
        auto labels = labeling_from_json(read_json_file(o.labels_file));
        auto out = run_local(alg, sg, labels, o.rounds, o.common.threads);
        auto check = check_lcl(problem, sg, out);
        report["output"] = labeling_to_json(out);
        report["success"] = check.ok;
        report["violations"] = check.violations;
        emit(o.common, report, timer);
        return check.ok ? 0 : 1;
    }
    throw std::invalid_argument("unknown simulate mode: " + o.mode);
}

// ---- reduce ----------------------------------------------------------------

struct ReduceOpts {
    CommonOpts common;
    std::string graph_file, alg = "identity", lcl = "distinct";
    int rounds = 0;
    long ell = 2;
    long cap = 1000000;
    long samples = 20;
    std::string csp_out;
    std::string witness_file;  // set: run the full pipeline after reducing
    std::string output_labels;
};

int run_reduce(const ReduceOpts& o) {
    Timer timer;
    StructuredGraph sg = structured_from_json(read_json_file(o.graph_file));
    auto alg = algorithm_of(o.alg);
    auto problem = lcl_of(o.lcl);
    ReductionOptions opts;
    opts.materialize_cap = o.cap;
    opts.seed = o.common.seed;
    opts.threads = o.common.threads;
    auto red = lcl_to_csp(problem, alg, o.rounds, o.ell, sg, opts);
    auto checks = verify_reduction(red, problem, alg, sg, o.samples, o.common.seed);
    if (!o.csp_out.empty()) write_json_file(o.csp_out, csp_to_json(red.csp, o.cap));
    std::map<long, long> hist;
    for (long b : red.ball_sizes) ++hist[b];
    json hist_json = json::object();
    for (const auto& [size, count] : hist) hist_json[std::to_string(size)] = count;
    json report{{"command", "reduce"},
                {"graph", o.graph_file},
                {"algorithm", alg.name},
                {"lcl", problem.name},
                {"T", o.rounds},
                {"ell", o.ell},
                {"radius_star", red.radius_star},
                {"ball_size_histogram", hist_json},
                {"p", rat_json(red.p_exact)},
                {"p_is_exact", red.p_is_exact},
                {"d", red.d_value},
                {"checks",
                 {{"solutions_checked", checks.solutions_checked},
                  {"solutions_enumerated", checks.solutions_enumerated},
                  {"all_decoded_pass", checks.all_decoded_pass},
                  {"domains_are_balls", checks.domains_are_balls},
                  {"d_bound_ok", checks.d_bound_ok},
                  {"subgraph_ok", checks.subgraph_ok},
                  {"p_at_most_one_over_n", checks.p_at_most_one_over_n},
                  {"detail", checks.detail}}}};
    if (!o.witness_file.empty()) {
        auto witness = witness_from_json(read_json_file(o.witness_file));
        PipelineOptions popts;
        popts.reduction = opts;
        popts.numeric = numeric_of(o.common);
        popts.threads = o.common.threads;
        PipelineReport prep;
        Labeling out = pipeline_theorem48(problem, alg, o.rounds, o.ell, sg, witness, popts, &prep);
        report["pipeline"] = {
            {"radius_star", prep.radius_star},
            {"max_ball", prep.max_ball},
            {"max_ball_2r", prep.max_ball_2r},
            {"witness_s", prep.witness_s},
            {"shatter_s", prep.shatter_s},
            {"rescaled_budget", prep.rescaled_budget},
            {"ball_hypothesis_ok", prep.ball_hypothesis_ok},
            {"condition", condition_json(prep.condition, LLLCondition::shatter(prep.shatter_s))},
            {"rounds", prep.solve.rounds},
            {"round_class_counts", prep.solve.round_class_counts},
            {"verdict", prep.lcl_verified ? "colored" : "failed"}};
        if (!o.output_labels.empty()) write_json_file(o.output_labels, labeling_to_json(out));
    }
    emit(o.common, report, timer);
    bool structural = checks.all_decoded_pass && checks.domains_are_balls && checks.d_bound_ok &&
                      checks.subgraph_ok;
    return structural ? 0 : 1;
}

// ---- schreier ---------------------------------------------------------------

struct SchreierOpts {
    CommonOpts common;
    std::string action_file;
    std::string coloring_out, dot_out;
    bool via_lll = false;
};

int run_schreier(const SchreierOpts& o) {
    Timer timer;
    auto action = action_from_json(read_json_file(o.action_file));
    auto cls = classify(action);
    auto sch = schreier_graph(action);
    json report{{"command", "schreier"},
                {"action", o.action_file},
                {"points", action.points},
                {"edges", sch.graph.m()},
                {"F", cls.f_size}};
    SchreierColoringOptions opts;
    opts.sections_via_lll = o.via_lll;
    opts.seed = o.common.seed;
    EdgeColoringResult result;
    try {
        result = schreier_edge_coloring(action, opts);
    } catch (const std::runtime_error& e) {
        report["verdict"] = "failed";
        report["diagnostics"] = e.what();
        emit(o.common, report, timer);
        return 1;
    }
    auto check = verify_edge_coloring(sch.graph, result.colors);
    report["palette"] = result.palette;
    report["bound"] = cls.f_size + 1;
    report["verified"] = check.ok;
    report["verdict"] = check.ok ? "colored" : "verification-failed";
    if (!o.coloring_out.empty())
        write_json_file(o.coloring_out,
                        json{{"colors", result.colors}, {"palette", result.palette}});
    if (!o.dot_out.empty()) {
        std::ofstream dot(o.dot_out);
        dot << graph_to_dot(sch.graph, &result.colors);
    }
    emit(o.common, report, timer);
    return check.ok ? 0 : 1;
}

// ---- section ---------------------------------------------------------------

struct SectOpts {
    CommonOpts common;
    std::string g1_file, g2_file;
    long k = 2;
    int delta = 2;
    std::string solver = "moser-tardos";
    long max_resamples = -1;
    std::string section_out;
};

int run_section(const SectOpts& o) {
    Timer timer;
    Graph g1 = graph_from_json(read_json_file(o.g1_file));
    Graph g2 = graph_from_json(read_json_file(o.g2_file));
    SectionOptions opts;
    opts.solver = o.solver == "brute" ? SectionOptions::Solver::Brute
                                      : SectionOptions::Solver::MoserTardos;
    opts.seed = o.common.seed;
    opts.max_resamples = o.max_resamples;
    auto res = independent_complete_section(g1, g2, o.k, o.delta, opts);
    json report{{"command", "section"}, {"k", o.k},         {"delta", o.delta},
                {"g1", o.g1_file},      {"g2", o.g2_file},  {"solver", o.solver},
                {"subsets", res.selected.size()}};
    if (!res.section) {
        report["verdict"] = "failed";
        report["diagnostics"] = res.diagnostics;
        emit(o.common, report, timer);
        return 1;
    }
    report["section"] = *res.section;
    report["verdict"] = "found";
    if (!o.section_out.empty())
        write_json_file(o.section_out, json{{"section", *res.section}});
    emit(o.common, report, timer);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shatter: exact CSP solving via conditional probabilities, LOCAL simulation, "
                 "and combinatorial constructions"};
    app.require_subcommand(1);

    GenOpts gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate graphs, witnesses, partitions, CSPs");
    gen_cmd->add_option("--kind", gen.kind, "path | cycle | grid | regular");
    gen_cmd->add_option("--n", gen.n, "vertex count (path/cycle/regular)");
    gen_cmd->add_option("--grid-w", gen.grid_w, "grid width");
    gen_cmd->add_option("--grid-h", gen.grid_h, "grid height");
    gen_cmd->add_option("--degree", gen.degree, "degree for regular graphs");
    gen_cmd->add_option("--witness-block", gen.witness_block, "emit a separation witness (block/tile size)");
    gen_cmd->add_option("--witness-out", gen.witness_out, "witness output path");
    gen_cmd->add_option("--partition-out", gen.partition_out, "partition output path");
    gen_cmd->add_option("--csp-out", gen.csp_out, "CSP output path");
    gen_cmd->add_option("--coloring-q", gen.coloring_q, "emit the proper-coloring CSP");
    gen_cmd->add_flag("--sinkless", gen.sinkless, "emit the sinkless-orientation CSP");
    add_common(gen_cmd, gen.common);

    CheckOpts check;
    auto* check_cmd = app.add_subcommand("check", "evaluate an LLL condition on a CSP");
    check_cmd->add_option("--input", check.input, "CSP file")->required();
    check_cmd->add_option("--kind", check.kind, "classic | shatter | separation | polynomial");
    check_cmd->add_option("--s", check.s, "parameter for shatter/separation");
    add_common(check_cmd, check.common);

    SolveOpts solve;
    auto* solve_cmd = app.add_subcommand("solve", "solve a CSP");
    solve_cmd->add_option("--input", solve.input, "CSP file")->required();
    solve_cmd->add_option("--solver", solve.solver, "brute | moser-tardos | shattering");
    solve_cmd->add_option("--partition", solve.partition_file, "partition file (shattering)");
    solve_cmd->add_option("--witness", solve.witness_file, "separation witness file (shattering)");
    solve_cmd->add_option("--s", solve.s, "shattering parameter (default: partition width)");
    solve_cmd->add_option("--budget", solve.budget, "locality budget / component cap");
    solve_cmd->add_option("--max-resamples", solve.max_resamples, "moser-tardos resample budget");
    solve_cmd->add_option("--solution-out", solve.solution_out, "solution file");
    add_common(solve_cmd, solve.common);

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run a LOCAL algorithm");
    sim_cmd->add_option("--graph", sim.graph_file, "structured graph file")->required();
    sim_cmd->add_option("--alg", sim.alg, "identity | constant:k | label-mod:q | greedy-by-id | "
                                          "luby-mis | sinkless-trial");
    sim_cmd->add_option("--lcl", sim.lcl, "always-true | proper:q | distinct | mis | sinkless");
    sim_cmd->add_option("--T", sim.rounds, "rounds");
    sim_cmd->add_option("--mode", sim.mode, "det | random | labels");
    sim_cmd->add_option("--labels", sim.labels_file, "labeling file (mode=labels)");
    sim_cmd->add_option("--ell", sim.ell, "label range (mode=random)");
    sim_cmd->add_option("--trials", sim.trials, "trials (mode=random)");
    add_common(sim_cmd, sim.common);

    ReduceOpts red;
    auto* red_cmd = app.add_subcommand("reduce", "LCL -> CSP reduction with verification");
    red_cmd->add_option("--graph", red.graph_file, "structured graph file")->required();
    red_cmd->add_option("--alg", red.alg, "algorithm spec");
    red_cmd->add_option("--lcl", red.lcl, "LCL spec");
    red_cmd->add_option("--T", red.rounds, "rounds");
    red_cmd->add_option("--ell", red.ell, "label range");
    red_cmd->add_option("--cap", red.cap, "materialization cap");
    red_cmd->add_option("--samples", red.samples, "solution samples for decode checks");
    red_cmd->add_option("--csp-out", red.csp_out, "reduced CSP output");
    red_cmd->add_option("--witness", red.witness_file,
                        "separation witness: run the full reduce-and-solve pipeline");
    red_cmd->add_option("--labels-out", red.output_labels, "pipeline output labeling");
    add_common(red_cmd, red.common);

    SchreierOpts sch;
    auto* sch_cmd = app.add_subcommand("schreier", "edge-color a Schreier graph");
    sch_cmd->add_option("--action", sch.action_file, "action file")->required();
    sch_cmd->add_option("--coloring-out", sch.coloring_out, "coloring output");
    sch_cmd->add_option("--dot", sch.dot_out, "DOT export");
    sch_cmd->add_flag("--via-lll", sch.via_lll, "route sections through the LLL machinery");
    add_common(sch_cmd, sch.common);

    SectOpts sect;
    auto* sect_cmd = app.add_subcommand("section", "independent complete sections");
    sect_cmd->add_option("--g1", sect.g1_file, "independence graph")->required();
    sect_cmd->add_option("--g2", sect.g2_file, "component graph")->required();
    sect_cmd->add_option("--k", sect.k, "subset size per component");
    sect_cmd->add_option("--delta", sect.delta, "color range / degree bound");
    sect_cmd->add_option("--solver", sect.solver, "moser-tardos | brute");
    sect_cmd->add_option("--max-resamples", sect.max_resamples, "resample budget");
    sect_cmd->add_option("--section-out", sect.section_out, "section output");
    add_common(sect_cmd, sect.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) return run_gen(gen);
        if (check_cmd->parsed()) return run_check(check);
        if (solve_cmd->parsed()) return run_solve(solve);
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (red_cmd->parsed()) return run_reduce(red);
        if (sch_cmd->parsed()) return run_schreier(sch);
        if (sect_cmd->parsed()) return run_section(sect);
    } catch (const pipeline_error& e) {
        std::cerr << "condition error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
