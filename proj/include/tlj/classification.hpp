#pragma once

#include "tlj/fair_graph.hpp"
#include "tlj/solution.hpp"

#include <map>
#include <optional>
#include <string>

namespace tlj {

/// A fair-graph isomorphism respecting projections and weights.
struct IsoWitness {
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::string> edge_map;
};

/// Perron-Frobenius dimension data: d with w(alpha -> beta) = d(beta)/d(alpha).
struct DimensionFunction {
    std::map<std::string, double> d;
};

/// The graph generated by a solution: one vertex per grading index, and
/// dim(e,v,w) edges from (a,v) to (b,w) weighted by the spectrum of
/// Phi* Phi, computed as squared singular values and sorted ascending.
/// Requires check_zigzag(s, tol).ok().
FairGraph graph_from_solution(const FundamentalSolution& s, double tol);

/// The canonical solution of a balanced fair graph: gradings are the vertex
/// fibers, edges are orthonormal basis vectors, and Phi maps an edge to
/// sqrt(weight) times its involution partner.
FundamentalSolution solution_from_graph(const FairGraph& l, double tol);
FundamentalSolution solution_from_graph_with_involution(const FairGraph& l,
                                                        const BalancedInvolution& inv,
                                                        double tol);

/// Isomorphism of fair graphs over the same base (compared structurally):
/// iterated color refinement, then backtracking over the refined classes.
/// Parallel edges are matched by sorted weight lists. Deterministic.
std::optional<IsoWitness> fair_graph_isomorphic(const FairGraph& l1, const FairGraph& l2,
                                                double tol);

/// Unitary equivalence of the induced strict modules, decided through
/// isomorphism of the generated graphs. Both inputs must pass check_zigzag.
bool solutions_equivalent(const FundamentalSolution& s, const FundamentalSolution& t,
                          double tol);

/// Blockwise check of the conjugation identity
/// Phi^e_vw = U^ebar_wv o Psi^e_{phi(v), phi(w)} o (U^e_vw)^*
/// for a given family of unitaries and per-vertex index bijections.
bool verify_equivalence_witness(const FundamentalSolution& s, const FundamentalSolution& t,
                                const std::map<BlockKey, Matrix>& u,
                                const std::map<std::string, std::map<std::string, std::string>>&
                                    vertex_bijections,
                                double tol);

struct MwResult {
    std::optional<DimensionFunction> dims;
    ValidationReport report;
    // When the check fails on a cycle, the offending edge and the cycle's
    // weight product.
    std::optional<std::string> witness_edge;
    std::optional<double> witness_product;
};

/// Spanning-tree potential propagation from the smallest vertex id of each
/// component; Some(d) iff every non-tree edge is consistent (equivalently
/// every cycle's weight product is 1), with both Perron-Frobenius sum
/// conditions re-verified as a self-check. The report names the first
/// inconsistent cycle otherwise. Requires a fair and balanced input.
MwResult check_mw_type_report(const FairGraph& l, double tol);
std::optional<DimensionFunction> check_mw_type(const FairGraph& l, double tol);

} // namespace tlj
