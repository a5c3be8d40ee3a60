#pragma once

#include "tlj/bigraph.hpp"
#include "tlj/linalg.hpp"
#include "tlj/validation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tlj {

/// Grading sets J^a indexing the block decomposition, one per Gamma vertex.
struct GradingFamily {
    std::map<std::string, std::vector<std::string>> sets;

    bool has(const std::string& gamma_vertex, const std::string& index) const;
    bool operator==(const GradingFamily&) const = default;
};

struct BlockKey {
    std::string edge; // Gamma edge e: a -> b
    std::string v;    // index in J^a
    std::string w;    // index in J^b
    auto operator<=>(const BlockKey&) const = default;
};

/// Concrete cup data in bigraded Hilbert spaces. For each edge e and each
/// pair of grading indices with a nonzero block, `cups` holds the
/// coefficient matrix c with C^e_vw(1) = sum_ij c_ij xi_i (x) eta_j in the
/// standard bases. Blocks of dimension zero are omitted. Block dimensions
/// are the matrix sizes; dim_e(v,w) = dim_ebar(w,v) forces every stored
/// matrix square.
struct FundamentalSolution {
    BiGraphPtr base;
    GradingFamily gradings;
    std::map<BlockKey, Matrix> cups;

    int dim(const std::string& edge, const std::string& v, const std::string& w) const;
    const Matrix* find_cup(const BlockKey& key) const;
};

/// Antilinear block Phi^e_vw in coordinates: Phi(xi) = matrix * conj(xi), so
/// the columns of `matrix` are the images of the standard basis vectors.
struct AntiLinearBlock {
    Matrix matrix;
};

/// Well-formedness: ids resolve, blocks square and nonempty, the dual block
/// present with the same dimension. Codes: DANGLING_REFERENCE, EMPTY_BLOCK,
/// DIMENSION_MISMATCH, DUPLICATE_ID.
ValidationReport validate_solution(const FundamentalSolution& s);

/// Reads the antilinear blocks off the cups: Phi(xi_k) = sum_j c_kj eta_j,
/// i.e. the block matrix is the transpose of the cup coefficient matrix.
std::map<BlockKey, AntiLinearBlock> phi_from_cups(const FundamentalSolution& s);

/// Exact inverse of phi_from_cups: c = transpose(Phi matrix).
FundamentalSolution cups_from_phi(BiGraphPtr base, GradingFamily gradings,
                                  const std::map<BlockKey, AntiLinearBlock>& phi);

/// The two conjugate-equation conditions in the Phi form: the snake
/// ||Phi^ebar_wv Phi^e_vw - 1|| <= tol per block (operator norm), and the
/// trace sum |sum_w Tr(Phi* Phi) - delta_e| <= tol per (e, v). The report
/// carries the worst residual per block. Codes: ZIGZAG_SNAKE, ZIGZAG_TRACE.
ValidationReport check_zigzag(const FundamentalSolution& s, double tol);

/// Gauge change of the cup blocks, c' = U^e_vw c (U^ebar_wv)^T. Each u must
/// be unitary within 1e-10 and match its block's dimension.
FundamentalSolution conjugate_solution(const FundamentalSolution& s,
                                       const std::map<BlockKey, Matrix>& u);

/// One Haar-ish unitary per cup block, drawn in sorted block order.
std::map<BlockKey, Matrix> random_unitaries(const FundamentalSolution& s, std::uint64_t seed);

struct RandomSolutionParams {
    int sheets = 2; // sheet count for the integer-weight expansion family
};

/// Builds a fair graph from the parametric family matching g's shape (unit
/// loop, quantum-dimension path, integer-weight expansion, reciprocal pair),
/// takes its canonical solution and conjugates by seeded random unitaries.
/// Throws std::invalid_argument naming the obstruction when no family fits.
FundamentalSolution random_solution(BiGraphPtr g, std::uint64_t seed,
                                    RandomSolutionParams params = {});

} // namespace tlj
