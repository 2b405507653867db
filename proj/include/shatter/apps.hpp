#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shatter/csp.hpp"
#include "shatter/graph.hpp"
#include "shatter/lll.hpp"

namespace shatter {

/// One constraint per edge forbidding the q monochromatic assignments;
/// solutions are exactly the proper q-colorings.
CSP proper_coloring_csp(const Graph& g, int q);

/// Sinkless orientation as a CSP over E(G) with range 2: edge e points to
/// head_choice[e] iff its color is 0, and the constraint at v forbids the one
/// assignment orienting every incident edge into v.
struct SinklessCSP {
    CSP csp;  ///< universe = edge indices of g
    std::vector<int> head_choice;
};

/// Default head choice: the smaller endpoint. Requires min degree >= 1.
SinklessCSP sinkless_orientation_csp(const Graph& g, std::vector<int> head_choice = {});

struct Orientation {
    std::vector<std::pair<int, int>> directed;  ///< per edge index, (tail, head)
};

Orientation decode_orientation(const Graph& g, const std::vector<int>& head_choice,
                               const PartialColoring& f);

bool verify_sinkless(const Graph& g, const Orientation& o);

struct SectionOptions {
    enum class Solver { MoserTardos, Brute };
    Solver solver = Solver::MoserTardos;
    std::uint64_t seed = 1;
    long max_resamples = -1;
    long brute_budget = 20;
};

struct SectionResult {
    std::optional<VertexSet> section;
    std::vector<VertexSet> selected;  ///< one BFS-grown k-subset per g2 component
    std::string diagnostics;
};

/// Independent complete sections: trims one connected k-subset per
/// g2-component, deletes g1-edges inside each, solves the neighborhood CSP
/// with range delta, extracts S_f and shrinks it to one vertex per subset.
/// Solver failure is reported, not thrown (small k may legitimately fail).
SectionResult independent_complete_section(const Graph& g1, const Graph& g2, long k, int delta,
                                           const SectionOptions& opts = {});

struct FStarStats {
    double mean = 0;
    long min = 0;
    double p_below_k8 = 0;  ///< empirical P[|F*| < k/8]
    double sample_std = 0;
    long trials = 0;
    bool exact = false;
    std::map<long, Rat> exact_distribution;  ///< |F*| -> probability, when enumerable
};

/// F* = members of F none of whose neighbors received color 0 under a uniform
/// random coloring of the neighborhood. F must be independent in g.
FStarStats estimate_F_star(const Graph& g, const VertexSet& f_set, int delta, long trials,
                           std::uint64_t seed, long enum_cap = 100000);

struct ColoredPart {
    VertexSet part;
    std::map<int, int> coloring;  ///< vertex -> color, proper on g[part]
};

/// Offsets each part's palette past the previous ones; proper within parts
/// and across parts (palettes disjoint). Returns the merged coloring; the
/// total palette size goes to *palette_out.
std::map<int, int> union_coloring(const Graph& g, const std::vector<ColoredPart>& parts,
                                  int* palette_out = nullptr);

/// Colors S with one reserved color, then every part minus S with
/// Delta(g[part]) colors by reverse-BFS greedy from a degree-deficient
/// vertex; palettes offset as in union_coloring. Total palette is at most
/// 1 + sum of Delta(g[part]).
std::map<int, int> section_coloring(const Graph& g, const std::vector<VertexSet>& parts,
                                    const VertexSet& section, int* palette_out = nullptr);

/// Free-action surrogate at finite scale: every generator permutation has
/// all cycles of the same length (its order) and fixed-point-free powers.
struct SchreierAction {
    struct Generator {
        std::string name;
        std::vector<int> perm;
        std::string inverse;       ///< name of the inverse generator
        bool treat_as_long = false;  ///< route through the odd/long code path
    };
    int points = 0;
    std::vector<Generator> generators;
};

void validate_action(const SchreierAction& action);

/// Order of the generator's permutation.
int generator_order(const SchreierAction::Generator& gen);

struct GeneratorClassification {
    std::vector<int> f2;     ///< generator indices of order 2
    std::vector<int> f_even; ///< representatives (one per inverse pair), even order
    std::vector<int> f_odd;  ///< representatives, odd order, not flagged long
    std::vector<int> f_long; ///< representatives flagged treat-as-long
    int f_size = 0;          ///< |F| = |F2| + 2 |F_{>2}|
};

GeneratorClassification classify(const SchreierAction& action);

struct SchreierGraphResult {
    Graph graph;
    std::vector<int> edge_generator;  ///< per edge index, the contributing representative
    std::vector<std::string> generator_names;
};

/// Edges {x, sigma x} over the symmetric set; the per-generator edge sets
/// E_sigma must partition E(G) (violations throw).
SchreierGraphResult schreier_graph(const SchreierAction& action);

struct EdgeColoringResult {
    std::vector<int> colors;  ///< per edge index
    int palette = 0;
};

struct SchreierColoringOptions {
    /// Route the odd-cycle complete section through the LLL machinery instead
    /// of direct greedy choice (may legitimately fail at desk scale).
    bool sections_via_lll = false;
    std::uint64_t seed = 1;
};

/// Proper edge coloring with at most |F|+1 colors: order-2 and even-order
/// generators are colored part by part (1 and 2 colors each), odd/long
/// generators get a complete section over their line-graph cycles plus
/// two colors per generator.
EdgeColoringResult schreier_edge_coloring(const SchreierAction& action,
                                          const SchreierColoringOptions& opts = {});

struct EdgeColoringCheck {
    bool ok = true;
    std::vector<std::pair<int, int>> conflicts;  ///< incident edge pairs, equal colors
};

EdgeColoringCheck verify_edge_coloring(const Graph& g, const std::vector<int>& colors);

}  // namespace shatter
