#include "shatter/json_io.hpp"

#include <fstream>
#include <sstream>

namespace shatter {

namespace {

std::vector<int> int_vector(const json& j) {
    std::vector<int> out;
    for (const auto& x : j) out.push_back(x.get<int>());
    return out;
}

}  // namespace

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    return json{{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph_from_json: edge must be a pair");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Graph(n, std::move(edges));
}

json csp_to_json(const CSP& csp, long enum_cap) {
    csp.validate();
    int bound = csp.universe.empty() ? 0 : csp.universe.back() + 1;
    if (csp.universe != range_universe(bound))
        throw std::invalid_argument("csp_to_json: universe must be a dense range");
    json constraints = json::array();
    for (const auto& c : csp.constraints) {
        Constraint mat = c;
        mat.materialize(enum_cap);
        json forb = json::array();
        for (const auto& tuple : mat.forbidden()) forb.push_back(tuple);
        constraints.push_back({{"domain", mat.domain()}, {"forbidden", forb}});
    }
    return json{{"q", csp.q}, {"universe", bound}, {"constraints", constraints}};
}

CSP csp_from_json(const json& j) {
    CSP csp;
    csp.q = j.at("q").get<int>();
    csp.universe = range_universe(j.at("universe").get<int>());
    for (const auto& c : j.at("constraints")) {
        std::set<std::vector<int>> forbidden;
        for (const auto& t : c.at("forbidden")) forbidden.insert(int_vector(t));
        csp.constraints.push_back(
            Constraint::table(int_vector(c.at("domain")), csp.q, std::move(forbidden)));
    }
    csp.validate();
    return csp;
}

json partition_to_json(const FinitePartition& p) {
    json classes = json::array();
    for (const auto& cls : p.classes) classes.push_back(cls);
    return json{{"classes", classes}};
}

FinitePartition partition_from_json(const json& j) {
    FinitePartition p;
    for (const auto& cls : j.at("classes")) p.classes.push_back(int_vector(cls));
    p.normalize();
    return p;
}

json witness_to_json(const SeparationWitness& w) {
    json parts = json::array();
    for (const auto& part : w.parts) parts.push_back(part);
    return json{{"parts", parts}, {"budget", w.budget}};
}

SeparationWitness witness_from_json(const json& j) {
    SeparationWitness w;
    for (const auto& part : j.at("parts")) w.parts.push_back(int_vector(part));
    w.budget = j.at("budget").get<long>();
    return w;
}

json structured_to_json(const StructuredGraph& sg) {
    json out = graph_to_json(sg.g);
    json sigma = json::array();
    for (const auto& [tuple, value] : sg.sigma)
        sigma.push_back({{"tuple", tuple}, {"value", value}});
    out["sigma"] = sigma;
    return out;
}

StructuredGraph structured_from_json(const json& j) {
    StructuredGraph sg;
    sg.g = graph_from_json(j);
    if (j.contains("sigma")) {
        for (const auto& entry : j.at("sigma"))
            sg.sigma[int_vector(entry.at("tuple"))] = entry.at("value").get<long>();
    }
    sg.validate();
    return sg;
}

json labeling_to_json(const Labeling& labels) { return json{{"labels", labels}}; }

Labeling labeling_from_json(const json& j) {
    Labeling out;
    for (const auto& x : j.at("labels")) out.push_back(x.get<long>());
    return out;
}

json coloring_to_json(const PartialColoring& f, int universe_bound) {
    std::vector<int> colors(universe_bound, -1);
    for (const auto& [v, c] : f.assign) {
        if (v < 0 || v >= universe_bound)
            throw std::invalid_argument("coloring_to_json: vertex out of bound");
        colors[v] = c;
    }
    return json{{"q", f.q}, {"colors", colors}};
}

PartialColoring coloring_from_json(const json& j) {
    PartialColoring f(j.at("q").get<int>());
    int v = 0;
    for (const auto& c : j.at("colors")) {
        int color = c.get<int>();
        if (color >= 0) f.set(v, color);
        ++v;
    }
    return f;
}

json action_to_json(const SchreierAction& a) {
    json gens = json::array();
    for (const auto& g : a.generators) {
        json entry{{"name", g.name}, {"perm", g.perm}, {"inverse", g.inverse}};
        if (g.treat_as_long) entry["treat_as_long"] = true;
        gens.push_back(entry);
    }
    return json{{"points", a.points}, {"generators", gens}};
}

SchreierAction action_from_json(const json& j) {
    SchreierAction a;
    a.points = j.at("points").get<int>();
    for (const auto& g : j.at("generators")) {
        SchreierAction::Generator gen;
        gen.name = g.at("name").get<std::string>();
        gen.perm = int_vector(g.at("perm"));
        gen.inverse = g.at("inverse").get<std::string>();
        gen.treat_as_long = g.value("treat_as_long", false);
        a.generators.push_back(std::move(gen));
    }
    validate_action(a);
    return a;
}

std::string graph_to_dot(const Graph& g, const std::vector<int>* edge_colors) {
    static const char* palette[] = {"red",    "blue",  "green", "orange",
                                    "purple", "brown", "cyan",           "magenta"};
    std::ostringstream out;
    out << "graph G {\n";
    for (int v = 0; v < g.n(); ++v) out << "  " << v << ";\n";
    for (int e = 0; e < g.m(); ++e) {
        const auto& [u, v] = g.edges()[e];
        out << "  " << u << " -- " << v;
        if (edge_colors && e < static_cast<int>(edge_colors->size())) {
            int c = (*edge_colors)[e];
            out << " [label=" << c << ", color=" << palette[c % 8] << "]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace shatter
