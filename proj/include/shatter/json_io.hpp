#pragma once

#include <json.hpp>

#include <string>

#include "shatter/apps.hpp"
#include "shatter/csp.hpp"
#include "shatter/graph.hpp"
#include "shatter/local.hpp"
#include "shatter/shattering.hpp"

namespace shatter {

using nlohmann::json;

// Schemas:
//   graph     {"n": int, "edges": [[u,v],...]}            (u < v, lex sorted)
//   csp       {"q": int, "universe": int, "constraints":
//                [{"domain": [ids], "forbidden": [[colors]]}]}
//   partition {"classes": [[ids],...]}
//   witness   {"parts": [[ids],...], "budget": L}
//   structured graph = graph + {"sigma": [{"tuple": [ids], "value": nat}]}
//   labeling  {"labels": [nat,...]}
//   coloring  {"q": int, "colors": [int,...]}              (-1 = unassigned)
//   action    {"points": m, "generators":
//                [{"name": s, "perm": [...], "inverse": s,
//                  "treat_as_long": bool?}]}

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

/// Lazy constraints are materialized (budget_error above enum_cap). The
/// universe must be the dense range 0..n-1.
json csp_to_json(const CSP& csp, long enum_cap = 1000000);
CSP csp_from_json(const json& j);

json partition_to_json(const FinitePartition& p);
FinitePartition partition_from_json(const json& j);

json witness_to_json(const SeparationWitness& w);
SeparationWitness witness_from_json(const json& j);

json structured_to_json(const StructuredGraph& sg);
StructuredGraph structured_from_json(const json& j);

json labeling_to_json(const Labeling& labels);
Labeling labeling_from_json(const json& j);

json coloring_to_json(const PartialColoring& f, int universe_bound);
PartialColoring coloring_from_json(const json& j);

json action_to_json(const SchreierAction& a);
SchreierAction action_from_json(const json& j);

/// DOT export for visual inspection; optional per-edge colors.
std::string graph_to_dot(const Graph& g, const std::vector<int>* edge_colors = nullptr);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace shatter
