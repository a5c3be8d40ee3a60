#pragma once

#include "tlj/fair_graph.hpp"

#include <cstdint>

namespace tlj {

/// The three-vertex weighted bidirected graph of the worked example: a dual
/// loop pair of weight 1 at the white vertex, weight-2 dual edge pairs
/// white-grey and grey-shaded, and self-dual loops of weights 2 and 1 at the
/// shaded vertex.
BiGraph fixture_gamma1();

/// Path graph over a single self-dual loop of weight 2cos(pi/(n+1)); the
/// edge weights are consecutive ratios of the quantum dimensions
/// d_i = sin(i pi / (n+1)). Fair and balanced for every n >= 2.
FairGraph family_a_path(BiGraphPtr g, int n);

/// Two vertices over a single dual loop pair with delta = a + 1/a; every
/// vertex carries a loop of weight a and a cross edge of weight 1/a in each
/// fiber. Balanced but not of MW type unless a = 1.
FairGraph family_two_vertex_reciprocal(BiGraphPtr g, double a);

/// `sheets` disjoint copies of l glued by a cyclic shift on one balanced
/// dual pair of edges.
FairGraph family_cover(const FairGraph& l, int sheets);

/// Deterministically shuffles all vertex and edge ids; structure, weights
/// and projections are unchanged.
FairGraph family_relabel(const FairGraph& l, std::uint64_t seed);

/// Sheeted all-weight-one expansion of a graph with integer weights: each
/// weight-k edge fiber becomes k unit-weight edges per sheet vertex. With
/// two sheets over fixture_gamma1 this is the worked example's Lambda_1.
FairGraph integer_cover(BiGraphPtr g, int sheets);

FairGraph fixture_lambda1(BiGraphPtr gamma1);

} // namespace tlj
