#pragma once

#include "tlj/bigraph.hpp"
#include "tlj/validation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tlj {

struct FairVertex {
    std::string id;
    std::string pi; // Gamma vertex
    bool operator==(const FairVertex&) const = default;
};

struct FairEdge {
    std::string id;
    std::string source;
    std::string target;
    double weight = 0.0;
    std::string pi; // Gamma edge
    bool operator==(const FairEdge&) const = default;
};

/// A weighted directed graph Lambda with a projection homomorphism to Gamma.
struct FairGraph {
    BiGraphPtr base;
    std::vector<FairVertex> vertices;
    std::vector<FairEdge> edges;

    const FairVertex* find_vertex(const std::string& id) const;
    const FairEdge* find_edge(const std::string& id) const;
};

/// An edge involution reversing direction, inverting weights and
/// intertwining the projections with Gamma's duality. Fixed points allowed.
struct BalancedInvolution {
    std::map<std::string, std::string> pairing;
};

/// Structural validity: ids resolve, weights positive, pi is a graph
/// homomorphism. Codes: DUPLICATE_ID, DANGLING_REFERENCE,
/// NONPOSITIVE_WEIGHT, HOMOMORPHISM.
ValidationReport validate_fair_graph(const FairGraph& l);

/// Fairness: at every Lambda vertex the outgoing weights over each Gamma
/// edge fiber sum to that edge's weight. Empty vertex fibers are reported as
/// warnings only. Throws std::invalid_argument on structurally invalid input.
ValidationReport check_fair(const FairGraph& l, double tol);

struct BalanceResult {
    std::optional<BalancedInvolution> involution;
    ValidationReport report;
};

/// Groups edges by (source, target, projection, weight class) and pairs
/// partner groups; a balanced involution exists iff all partner-group
/// cardinalities agree. Deterministic pairing: ids sorted and zipped.
BalanceResult balance_involution(const FairGraph& l, double tol);

/// See balance_involution. Throws if check_fair fails.
std::optional<BalancedInvolution> find_balanced_involution(const FairGraph& l, double tol);

/// Checks the BalancedInvolution invariants against l.
ValidationReport validate_involution(const FairGraph& l, const BalancedInvolution& inv,
                                     double tol);

} // namespace tlj
