#pragma once

#include "tlj/diagram.hpp"
#include "tlj/linalg.hpp"
#include "tlj/solution.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tlj {

/// A grading tuple of a path e_1...e_n from a to b: indices (v_0, ..., v_n)
/// with every step dimension positive.
using GradingTuple = std::vector<std::string>;

/// A bigraded linear map between the block spaces of two paths. Blocks are
/// keyed by (domain tuple, codomain tuple); absent blocks are zero. Only
/// tuples sharing the outer indices v_0 and v_n ever carry a block.
struct BlockOperator {
    GammaPath domain;
    GammaPath codomain;
    std::map<std::pair<GradingTuple, GradingTuple>, Matrix> blocks;
};

std::vector<GradingTuple> grading_tuples(const FundamentalSolution& s, const GammaPath& p);

/// Product of the step dimensions along a tuple.
int tuple_dim(const FundamentalSolution& s, const GammaPath& p, const GradingTuple& t);

BlockOperator identity_operator(const FundamentalSolution& s, const GammaPath& p);
BlockOperator evaluate_slice(const FundamentalSolution& s, const ElementarySlice& slice);

/// Composition: after o before (domains of `after` match codomains of
/// `before`), summing over shared inner tuples in sorted order.
BlockOperator multiply(const BlockOperator& after, const BlockOperator& before);

/// Horizontal juxtaposition: Kronecker product on matching junction indices.
BlockOperator tensor_product(const FundamentalSolution& s, const BlockOperator& f,
                             const BlockOperator& g);

BlockOperator scale_operator(const BlockOperator& op, Complex c);
BlockOperator add_operators(const BlockOperator& a, const BlockOperator& b);
BlockOperator adjoint_operator(const BlockOperator& op);

/// Largest absolute entry difference over the union of block keys; a block
/// missing on one side counts as zero.
double block_distance(const BlockOperator& a, const BlockOperator& b);

/// Slice-by-slice contraction of every diagram term under the canonical
/// strict functor determined by the solution's cups. Defined for any
/// well-formed cup data; the zigzag equations are not required.
BlockOperator evaluate_functor(const FundamentalSolution& s, const Morphism2& m);

} // namespace tlj
