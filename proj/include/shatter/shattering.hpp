#pragma once

#include <vector>

#include "shatter/csp.hpp"
#include "shatter/graph.hpp"

namespace shatter {

/// Disjoint cover of a variable set by finite classes. Normal form: every
/// class sorted, classes ordered by minimum element, no empty class.
struct FinitePartition {
    std::vector<VertexSet> classes;

    /// Throws unless the classes are disjoint, nonempty and cover `universe`.
    void validate(const VertexSet& universe) const;

    /// Sorts classes into normal form.
    void normalize();
};

FinitePartition singleton_partition(const VertexSet& universe);

/// Partition of V(G) into parts whose induced subgraphs have all components
/// within the locality budget. The finite stand-in for a separation-index
/// witness: a partition only counts as a witness relative to its budget.
struct SeparationWitness {
    std::vector<VertexSet> parts;
    long budget = 0;

    int s() const { return static_cast<int>(parts.size()) - 1; }
};

/// Max over constraints of the number of classes meeting the domain.
long shattering_width(const FinitePartition& partition, const CSP& csp);

/// Classes := components of G[U_i] over all parts. For any CSP whose
/// dependency graph embeds in G this yields shattering width <= s+1.
FinitePartition partition_from_separation(const Graph& g, const SeparationWitness& witness);

struct SeparationCheck {
    bool ok = false;
    long worst_size = 0;
    VertexSet worst_component;
};

/// True iff every component of every G[part] has at most `budget` vertices.
SeparationCheck verify_separation(const Graph& g, const std::vector<VertexSet>& parts,
                                  long budget);

/// Two alternating parts of blocks of length <= L along each path/cycle
/// component; every induced component has <= L vertices. Requires every
/// component to be a path or a cycle of length >= 2L.
SeparationWitness interval_separation(const Graph& g, long block_length);

/// Three parts from L x L tiles of a w*h grid (diagonal stripes); every
/// induced component fits inside one tile, so the emitted budget is L*L.
/// Degenerate small grids may need fewer parts.
SeparationWitness grid_separation(const Graph& g, int w, int h, long tile);

}  // namespace shatter
