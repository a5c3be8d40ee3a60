#include "tlj/solution.hpp"

#include "tlj/classification.hpp"
#include "tlj/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

bool GradingFamily::has(const std::string& gamma_vertex, const std::string& index) const {
    auto it = sets.find(gamma_vertex);
    if (it == sets.end()) return false;
    return std::find(it->second.begin(), it->second.end(), index) != it->second.end();
}

int FundamentalSolution::dim(const std::string& edge, const std::string& v,
                             const std::string& w) const {
    auto it = cups.find(BlockKey{edge, v, w});
    return it == cups.end() ? 0 : static_cast<int>(it->second.rows());
}

const Matrix* FundamentalSolution::find_cup(const BlockKey& key) const {
    auto it = cups.find(key);
    return it == cups.end() ? nullptr : &it->second;
}

ValidationReport validate_solution(const FundamentalSolution& s) {
    ValidationReport report;
    if (!s.base) {
        report.fail("DANGLING_REFERENCE", {}, "solution has no base graph");
        return report;
    }
    const BiGraph& g = *s.base;

    for (const auto& a : g.vertices) {
        auto it = s.gradings.sets.find(a);
        if (it == s.gradings.sets.end()) {
            report.fail("DANGLING_REFERENCE", {a}, "no grading set for vertex '" + a + "'");
            continue;
        }
        if (it->second.empty()) report.warn("EMPTY_GRADING", {a}, "empty grading set at '" + a + "'");
        std::set<std::string> seen;
        for (const auto& v : it->second)
            if (!seen.insert(v).second)
                report.fail("DUPLICATE_ID", {a, v}, "duplicate grading index '" + v + "'");
    }
    for (const auto& [a, ids] : s.gradings.sets)
        if (!g.has_vertex(a))
            report.fail("DANGLING_REFERENCE", {a}, "grading set for unknown vertex '" + a + "'");

    for (const auto& [key, cup] : s.cups) {
        const GammaEdge* e = g.find_edge(key.edge);
        if (!e) {
            report.fail("DANGLING_REFERENCE", {key.edge}, "cup block for unknown edge");
            continue;
        }
        if (!s.gradings.has(e->source, key.v) || !s.gradings.has(e->target, key.w)) {
            report.fail("DANGLING_REFERENCE", {key.edge, key.v, key.w},
                        "cup block indices outside the grading sets");
            continue;
        }
        if (cup.rows() == 0 || cup.cols() == 0) {
            report.fail("EMPTY_BLOCK", {key.edge, key.v, key.w},
                        "zero-dimensional blocks must be omitted");
            continue;
        }
        const Matrix* dual = s.find_cup(BlockKey{e->dual, key.w, key.v});
        if (!dual) {
            report.fail("DIMENSION_MISMATCH", {key.edge, key.v, key.w},
                        "dual block (" + e->dual + ", " + key.w + ", " + key.v + ") missing");
            continue;
        }
        // dim_e(v,w) = dim_ebar(w,v) makes every block square.
        if (cup.rows() != cup.cols() || dual->rows() != cup.rows())
            report.fail("DIMENSION_MISMATCH", {key.edge, key.v, key.w},
                        "block dimensions disagree with the dual block");
    }
    return report;
}

std::map<BlockKey, AntiLinearBlock> phi_from_cups(const FundamentalSolution& s) {
    std::map<BlockKey, AntiLinearBlock> phi;
    for (const auto& [key, cup] : s.cups) phi[key] = AntiLinearBlock{cup.transpose()};
    return phi;
}

FundamentalSolution cups_from_phi(BiGraphPtr base, GradingFamily gradings,
                                  const std::map<BlockKey, AntiLinearBlock>& phi) {
    FundamentalSolution s;
    s.base = std::move(base);
    s.gradings = std::move(gradings);
    for (const auto& [key, block] : phi) {
        if (block.matrix.rows() != block.matrix.cols())
            throw std::invalid_argument("cups_from_phi: non-square block at edge '" + key.edge +
                                        "'");
        s.cups[key] = block.matrix.transpose();
    }
    return s;
}

ValidationReport check_zigzag(const FundamentalSolution& s, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("check_zigzag: tol must be positive");
    if (!validate_solution(s).ok())
        throw std::invalid_argument("check_zigzag: solution is not well-formed");
    const BiGraph& g = *s.base;
    ValidationReport report;

    auto phi = phi_from_cups(s);
    for (const auto& [key, block] : phi) {
        const GammaEdge& e = g.edge(key.edge);
        const Matrix& a = block.matrix;
        const Matrix& b = phi.at(BlockKey{e.dual, key.w, key.v}).matrix;
        // Composite of two antilinear maps in coordinates: B conj(A).
        Matrix snake = b * a.conjugate() - Matrix::Identity(a.cols(), a.cols());
        double residual = operator_norm(snake);
        if (residual > tol) {
            std::ostringstream msg;
            msg << "snake residual " << residual << " at (" << key.edge << ", " << key.v << ", "
                << key.w << ")";
            report.fail("ZIGZAG_SNAKE", {key.edge, key.v, key.w}, msg.str());
        }
    }

    for (const auto& e : g.edges) {
        for (const auto& v : s.gradings.sets.at(e.source)) {
            double sum = 0.0;
            for (const auto& w : s.gradings.sets.at(e.target)) {
                auto it = phi.find(BlockKey{e.id, v, w});
                if (it != phi.end()) sum += it->second.matrix.squaredNorm();
            }
            double residual = std::abs(sum - e.weight);
            if (residual > tol) {
                std::ostringstream msg;
                msg << "trace sum " << sum << " differs from delta " << e.weight << " by "
                    << residual << " at (" << e.id << ", " << v << ")";
                report.fail("ZIGZAG_TRACE", {e.id, v}, msg.str());
            }
        }
    }
    return report;
}

FundamentalSolution conjugate_solution(const FundamentalSolution& s,
                                       const std::map<BlockKey, Matrix>& u) {
    if (!validate_solution(s).ok())
        throw std::invalid_argument("conjugate_solution: solution is not well-formed");
    const BiGraph& g = *s.base;

    auto unitary_at = [&](const BlockKey& key, Eigen::Index dim) -> const Matrix& {
        auto it = u.find(key);
        if (it == u.end())
            throw std::invalid_argument("conjugate_solution: missing unitary for block (" +
                                        key.edge + ", " + key.v + ", " + key.w + ")");
        if (it->second.rows() != dim || it->second.cols() != dim)
            throw std::invalid_argument("conjugate_solution: unitary shape mismatch at (" +
                                        key.edge + ", " + key.v + ", " + key.w + ")");
        if (unitarity_defect(it->second) > 1e-10)
            throw std::invalid_argument("conjugate_solution: matrix at (" + key.edge + ", " +
                                        key.v + ", " + key.w + ") is not unitary");
        return it->second;
    };

    FundamentalSolution out;
    out.base = s.base;
    out.gradings = s.gradings;
    for (const auto& [key, cup] : s.cups) {
        const GammaEdge& e = g.edge(key.edge);
        const Matrix& ue = unitary_at(key, cup.rows());
        const Matrix& ud = unitary_at(BlockKey{e.dual, key.w, key.v}, cup.cols());
        out.cups[key] = ue * cup * ud.transpose();
    }
    return out;
}

std::map<BlockKey, Matrix> random_unitaries(const FundamentalSolution& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::map<BlockKey, Matrix> u;
    for (const auto& [key, cup] : s.cups)
        u[key] = random_unitary(static_cast<int>(cup.rows()), rng);
    return u;
}

FundamentalSolution random_solution(BiGraphPtr g, std::uint64_t seed,
                                    RandomSolutionParams params) {
    if (!g || !validate_bigraph(*g).ok())
        throw std::invalid_argument("random_solution: invalid base graph");

    const bool single_self_dual_loop = g->vertices.size() == 1 && g->edges.size() == 1 &&
                                       g->edges[0].dual == g->edges[0].id;
    const bool dual_loop_pair = g->vertices.size() == 1 && g->edges.size() == 2 &&
                                g->edges[0].dual != g->edges[0].id;
    bool all_integer = true;
    for (const auto& e : g->edges) {
        double r = std::round(e.weight);
        if (!(r >= 1.0) || std::abs(e.weight - r) > 1e-9) all_integer = false;
    }

    FairGraph lambda;
    if (single_self_dual_loop && std::abs(g->edges[0].weight - 1.0) <= 1e-9) {
        lambda.base = g;
        lambda.vertices = {{"v0", g->vertices[0]}};
        lambda.edges = {{"l0", "v0", "v0", 1.0, g->edges[0].id}};
    } else if (single_self_dual_loop) {
        int n = 0;
        for (int cand = 2; cand <= 64 && n == 0; ++cand)
            if (std::abs(g->edges[0].weight - 2.0 * std::cos(std::numbers::pi / (cand + 1))) <=
                1e-9)
                n = cand;
        if (n > 0)
            lambda = family_a_path(g, n);
        else if (all_integer)
            lambda = integer_cover(g, params.sheets);
        else
            throw std::invalid_argument(
                "random_solution: self-dual loop weight is neither 2cos(pi/(n+1)) nor an integer");
    } else if (all_integer) {
        lambda = integer_cover(g, params.sheets);
    } else if (dual_loop_pair && g->edges[0].weight >= 2.0 - 1e-9) {
        double delta = g->edges[0].weight;
        double a = (delta + std::sqrt(std::max(0.0, delta * delta - 4.0))) / 2.0;
        lambda = family_two_vertex_reciprocal(g, a);
    } else {
        throw std::invalid_argument(
            "random_solution: no parametric family matches this graph shape "
            "(need unit/quantum-dimension/integer weights or a reciprocal dual loop pair)");
    }

    FundamentalSolution s = solution_from_graph(lambda, 1e-10);
    return conjugate_solution(s, random_unitaries(s, seed));
}

} // namespace tlj
