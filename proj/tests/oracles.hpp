#pragma once

// Independent test oracles. Everything here recomputes results through a
// different route than the library: a hand-rolled Hermitian Jacobi
// eigensolver (vs the SVD path), permutation search (vs color refinement),
// and exhaustive pairing search (vs group counting).

#include "tlj/classification.hpp"
#include "tlj/diagram.hpp"
#include "tlj/fair_graph.hpp"
#include "tlj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tlj::oracle {

// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations,
// sorted ascending.
inline std::vector<double> hermitian_eigenvalues(Matrix a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off < 1e-28 * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                std::complex<double> b = a(p, q);
                double babs = std::abs(b);
                if (babs < 1e-300) continue;
                std::complex<double> phase = b / babs;
                double theta =
                    0.5 * std::atan2(2.0 * babs, a(p, p).real() - a(q, q).real());
                double c = std::cos(theta), s = std::sin(theta);
                Matrix u = Matrix::Identity(n, n);
                u(p, p) = c;
                u(p, q) = -s * phase;
                u(q, p) = s * std::conj(phase);
                u(q, q) = c;
                a = (u.adjoint() * a * u).eval();
            }
    }
    std::vector<double> eigenvalues;
    for (Eigen::Index i = 0; i < n; ++i) eigenvalues.push_back(a(i, i).real());
    std::sort(eigenvalues.begin(), eigenvalues.end());
    return eigenvalues;
}

// Spectrum of Phi* Phi recomputed from the antilinear block matrix without
// touching the SVD: the positive operator's matrix is A^T conj(A).
inline std::vector<double> phi_star_phi_spectrum(const Matrix& a) {
    return hermitian_eigenvalues(a.transpose() * a.conjugate());
}

inline bool weights_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

// Plain permutation search over projection-respecting vertex bijections.
inline bool brute_force_isomorphic(const FairGraph& l1, const FairGraph& l2, double tol) {
    if (l1.vertices.size() != l2.vertices.size() || l1.edges.size() != l2.edges.size())
        return false;
    std::vector<FairVertex> v1 = l1.vertices, v2 = l2.vertices;
    std::sort(v1.begin(), v1.end(), [](auto& a, auto& b) { return a.id < b.id; });
    std::sort(v2.begin(), v2.end(), [](auto& a, auto& b) { return a.id < b.id; });

    auto pair_multiset = [](const FairGraph& l, const std::string& s, const std::string& t) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& e : l.edges)
            if (e.source == s && e.target == t) out.push_back({e.pi, e.weight});
        std::sort(out.begin(), out.end());
        return out;
    };

    std::map<std::string, std::string> assignment;
    std::set<std::string> used;
    std::function<bool(std::size_t)> go = [&](std::size_t depth) {
        if (depth == v1.size()) {
            for (const auto& a : v1)
                for (const auto& b : v1) {
                    auto m1 = pair_multiset(l1, a.id, b.id);
                    auto m2 = pair_multiset(l2, assignment[a.id], assignment[b.id]);
                    if (m1.size() != m2.size()) return false;
                    for (std::size_t i = 0; i < m1.size(); ++i) {
                        if (m1[i].first != m2[i].first) return false;
                        if (!weights_close(m1[i].second, m2[i].second, tol)) return false;
                    }
                }
            return true;
        }
        const FairVertex& v = v1[depth];
        for (const auto& cand : v2) {
            if (cand.pi != v.pi || used.count(cand.id)) continue;
            assignment[v.id] = cand.id;
            used.insert(cand.id);
            if (go(depth + 1)) return true;
            assignment.erase(v.id);
            used.erase(cand.id);
        }
        return false;
    };
    return go(0);
}

// Exhaustive search for a balanced involution: recursively pair the first
// unpaired edge with every compatible partner (or fix it).
inline bool exhaustive_involution_exists(const FairGraph& l, double tol) {
    const BiGraph& g = *l.base;
    std::vector<const FairEdge*> edges;
    for (const auto& e : l.edges) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(),
              [](const FairEdge* a, const FairEdge* b) { return a->id < b->id; });

    auto compatible = [&](const FairEdge& a, const FairEdge& b) {
        if (b.source != a.target || b.target != a.source) return false;
        if (g.dual_of(a.pi) != b.pi) return false;
        double product = a.weight * b.weight;
        return std::abs(product - 1.0) <= tol * std::max(1.0, product);
    };
    auto fixable = [&](const FairEdge& a) {
        return a.source == a.target && g.dual_of(a.pi) == a.pi &&
               std::abs(a.weight * a.weight - 1.0) <= tol;
    };

    std::set<std::size_t> paired;
    std::function<bool(void)> go = [&]() {
        std::size_t first = edges.size();
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (!paired.count(i)) {
                first = i;
                break;
            }
        if (first == edges.size()) return true;
        if (fixable(*edges[first])) {
            paired.insert(first);
            if (go()) return true;
            paired.erase(first);
        }
        for (std::size_t j = first + 1; j < edges.size(); ++j) {
            if (paired.count(j) || !compatible(*edges[first], *edges[j])) continue;
            paired.insert(first);
            paired.insert(j);
            if (go()) return true;
            paired.erase(first);
            paired.erase(j);
        }
        return false;
    };
    return go();
}

// Largest coefficient difference between two 2-morphisms over the union of
// their diagram terms.
inline double morphism_distance(const Morphism2& f, const Morphism2& g) {
    double worst = 0.0;
    for (const auto& [d, c] : f.terms) {
        auto it = g.terms.find(d);
        Complex other = it == g.terms.end() ? Complex(0, 0) : it->second;
        worst = std::max(worst, std::abs(c - other));
    }
    for (const auto& [d, c] : g.terms)
        if (!f.terms.count(d)) worst = std::max(worst, std::abs(c));
    return worst;
}

} // namespace tlj::oracle
