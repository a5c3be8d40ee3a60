#pragma once

#include "tlj/validation.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tlj {

/// One directed edge of a weighted bidirected graph. `dual` names the edge
/// obtained by reversing direction; the weight is the loop parameter of the
/// skein relation and must agree exactly with the dual's weight.
struct GammaEdge {
    std::string id;
    std::string source;
    std::string target;
    double weight = 0.0;
    std::string dual;

    bool operator==(const GammaEdge&) const = default;
};

/// A weighted bidirected graph: finite directed graph with an edge involution
/// that reverses sources and targets and preserves weights. Immutable after
/// construction by convention; all operations treat it as read-only.
struct BiGraph {
    std::vector<std::string> vertices;
    std::vector<GammaEdge> edges;

    bool operator==(const BiGraph&) const = default;

    bool has_vertex(const std::string& id) const;
    const GammaEdge* find_edge(const std::string& id) const;
    /// Throws std::invalid_argument for unknown ids.
    const GammaEdge& edge(const std::string& id) const;
    const std::string& dual_of(const std::string& id) const;
    double weight_of(const std::string& id) const;
};

using BiGraphPtr = std::shared_ptr<const BiGraph>;

/// Sorted copy (vertices and edges by id); used for canonical serialization
/// and structural comparison.
BiGraph canonical(const BiGraph& g);

/// True iff the two graphs are structurally identical after canonical
/// sorting (weights compared bit-exactly, as authored).
bool same_gamma(const BiGraph& a, const BiGraph& b);

/// Checks every BiGraph invariant. Violation codes: DUPLICATE_ID,
/// DANGLING_REFERENCE, NONPOSITIVE_WEIGHT, DUAL_NOT_INVOLUTION,
/// DUAL_ENDPOINT_MISMATCH, DUAL_WEIGHT_MISMATCH. Never throws.
ValidationReport validate_bigraph(const BiGraph& g);

/// Connectivity of the underlying undirected graph. The empty graph is not
/// connected. Requires validate_bigraph(g).ok().
bool is_connected(const BiGraph& g);

enum class StandardGamma { Unoriented, Oriented, TwoColor, Shaded };

/// The generating graphs of the standard Temperley-Lieb-Jones categories:
/// one self-dual loop; a dual loop pair; two self-dual loops (two colors);
/// two vertices joined by a dual edge pair. `weights` takes one entry,
/// except TwoColor which takes two.
BiGraph standard_gamma(StandardGamma kind, const std::vector<double>& weights);

} // namespace tlj
