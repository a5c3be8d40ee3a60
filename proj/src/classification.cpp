#include "tlj/classification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

namespace {

std::string joined(const std::string& a, const std::string& b) { return a + "|" + b; }

bool weights_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

} // namespace

FairGraph graph_from_solution(const FundamentalSolution& s, double tol) {
    if (!check_zigzag(s, tol).ok())
        throw std::invalid_argument("graph_from_solution: solution fails the zigzag equations");
    const BiGraph& g = *s.base;

    FairGraph l;
    l.base = s.base;
    for (const auto& a : g.vertices)
        for (const auto& v : s.gradings.sets.at(a)) l.vertices.push_back({joined(a, v), a});

    for (const auto& [key, cup] : s.cups) {
        const GammaEdge& e = g.edge(key.edge);
        Matrix phi = cup.transpose();
        std::vector<double> weights = squared_singular_values_ascending(phi);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            FairEdge eps;
            eps.id = key.edge + "|" + key.v + "|" + key.w + "|" + std::to_string(k);
            eps.source = joined(e.source, key.v);
            eps.target = joined(e.target, key.w);
            eps.weight = weights[k];
            eps.pi = key.edge;
            l.edges.push_back(std::move(eps));
        }
    }
    std::sort(l.vertices.begin(), l.vertices.end(),
              [](const FairVertex& a, const FairVertex& b) { return a.id < b.id; });
    std::sort(l.edges.begin(), l.edges.end(),
              [](const FairEdge& a, const FairEdge& b) { return a.id < b.id; });
    return l;
}

FundamentalSolution solution_from_graph_with_involution(const FairGraph& l,
                                                        const BalancedInvolution& inv,
                                                        double tol) {
    if (!check_fair(l, tol).ok())
        throw std::invalid_argument("solution_from_graph: input is not fair");
    if (!validate_involution(l, inv, tol).ok())
        throw std::invalid_argument("solution_from_graph: involution is not balanced");
    const BiGraph& g = *l.base;

    GradingFamily gradings;
    for (const auto& a : g.vertices) gradings.sets[a] = {};
    for (const auto& v : l.vertices) gradings.sets[v.pi].push_back(v.id);
    for (auto& [a, ids] : gradings.sets) std::sort(ids.begin(), ids.end());

    // Orthonormal bases: the edges of each fiber block, sorted by id.
    std::map<BlockKey, std::vector<std::string>> basis;
    std::map<std::string, const FairEdge*> edge_by_id;
    for (const auto& e : l.edges) {
        basis[BlockKey{e.pi, e.source, e.target}].push_back(e.id);
        edge_by_id[e.id] = &e;
    }
    for (auto& [key, ids] : basis) std::sort(ids.begin(), ids.end());

    std::map<BlockKey, AntiLinearBlock> phi;
    for (const auto& [key, ids] : basis) {
        const GammaEdge& e = g.edge(key.edge);
        const BlockKey dual_key{e.dual, key.w, key.v};
        const auto& dual_basis = basis.at(dual_key);
        Matrix a = Matrix::Zero(static_cast<Eigen::Index>(dual_basis.size()),
                                static_cast<Eigen::Index>(ids.size()));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const FairEdge& eps = *edge_by_id.at(ids[i]);
            const std::string& partner = inv.pairing.at(eps.id);
            auto jt = std::find(dual_basis.begin(), dual_basis.end(), partner);
            if (jt == dual_basis.end())
                throw std::invalid_argument(
                    "solution_from_graph: involution image leaves the dual block");
            a(jt - dual_basis.begin(), static_cast<Eigen::Index>(i)) = std::sqrt(eps.weight);
        }
        phi[key] = AntiLinearBlock{std::move(a)};
    }
    return cups_from_phi(l.base, std::move(gradings), phi);
}

FundamentalSolution solution_from_graph(const FairGraph& l, double tol) {
    auto inv = find_balanced_involution(l, tol);
    if (!inv)
        throw std::invalid_argument("solution_from_graph: input admits no balanced involution");
    return solution_from_graph_with_involution(l, *inv, tol);
}

namespace {

// Shared quantization of edge weights across both graphs: sorted sweep into
// clusters, no hashing.
struct WeightClusters {
    std::vector<double> reps;
    int index_of(double w, double tol) const {
        int best = -1;
        double best_gap = 0.0;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            double gap = std::abs(reps[i] - w);
            if (!weights_close(reps[i], w, tol)) continue;
            if (best < 0 || gap < best_gap) {
                best = static_cast<int>(i);
                best_gap = gap;
            }
        }
        return best;
    }
};

WeightClusters cluster_weights(const FairGraph& l1, const FairGraph& l2, double tol) {
    std::vector<double> all;
    for (const auto& e : l1.edges) all.push_back(e.weight);
    for (const auto& e : l2.edges) all.push_back(e.weight);
    std::sort(all.begin(), all.end());
    WeightClusters clusters;
    for (double w : all)
        if (clusters.reps.empty() || !weights_close(clusters.reps.back(), w, tol))
            clusters.reps.push_back(w);
    return clusters;
}

struct IsoContext {
    const FairGraph& l1;
    const FairGraph& l2;
    double tol;
    std::map<std::string, int> pi_vertex_index;
    std::map<std::string, int> pi_edge_index;
    WeightClusters clusters;

    // Per graph: vertex ids sorted, adjacency as (pi index, cluster, weight)
    // multisets per ordered vertex pair.
    struct Side {
        std::vector<std::string> vertex_ids;
        std::map<std::string, int> vertex_pos;
        // key: (source, target) -> sorted list of (pi idx, weight, id)
        std::map<std::pair<std::string, std::string>,
                 std::vector<std::tuple<int, double, std::string>>>
            between;
    };
    Side side1, side2;
};

void build_side(IsoContext& ctx, const FairGraph& l, IsoContext::Side& side) {
    for (const auto& v : l.vertices) side.vertex_ids.push_back(v.id);
    std::sort(side.vertex_ids.begin(), side.vertex_ids.end());
    for (std::size_t i = 0; i < side.vertex_ids.size(); ++i)
        side.vertex_pos[side.vertex_ids[i]] = static_cast<int>(i);
    for (const auto& e : l.edges)
        side.between[{e.source, e.target}].push_back(
            {ctx.pi_edge_index.at(e.pi), e.weight, e.id});
    for (auto& [key, edges] : side.between) std::sort(edges.begin(), edges.end());
}

bool multisets_match(const std::vector<std::tuple<int, double, std::string>>& a,
                     const std::vector<std::tuple<int, double, std::string>>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::get<0>(a[i]) != std::get<0>(b[i])) return false;
        if (!weights_close(std::get<1>(a[i]), std::get<1>(b[i]), tol)) return false;
    }
    return true;
}

// Iterated color refinement with a color dictionary shared by both graphs.
std::pair<std::vector<int>, std::vector<int>> refine_colors(const IsoContext& ctx) {
    const FairGraph& l1 = ctx.l1;
    const FairGraph& l2 = ctx.l2;

    auto initial = [&](const FairGraph& l, const IsoContext::Side& side) {
        std::vector<int> colors(side.vertex_ids.size(), 0);
        for (const auto& v : l.vertices)
            colors[static_cast<std::size_t>(side.vertex_pos.at(v.id))] =
                ctx.pi_vertex_index.at(v.pi);
        return colors;
    };
    std::vector<int> c1 = initial(l1, ctx.side1);
    std::vector<int> c2 = initial(l2, ctx.side2);

    using Signature = std::vector<std::tuple<int, int, int, int>>; // dir, pi, cluster, color
    for (std::size_t round = 0; round < ctx.side1.vertex_ids.size() + 2; ++round) {
        auto signature = [&](const FairGraph& l, const IsoContext::Side& side,
                             const std::vector<int>& colors) {
            std::vector<std::pair<Signature, int>> sigs(side.vertex_ids.size());
            for (std::size_t i = 0; i < side.vertex_ids.size(); ++i)
                sigs[i] = {Signature{}, colors[i]};
            for (const auto& e : l.edges) {
                int si = side.vertex_pos.at(e.source);
                int ti = side.vertex_pos.at(e.target);
                int pi_idx = ctx.pi_edge_index.at(e.pi);
                int cluster = ctx.clusters.index_of(e.weight, ctx.tol);
                sigs[static_cast<std::size_t>(si)].first.push_back(
                    {0, pi_idx, cluster, colors[static_cast<std::size_t>(ti)]});
                sigs[static_cast<std::size_t>(ti)].first.push_back(
                    {1, pi_idx, cluster, colors[static_cast<std::size_t>(si)]});
            }
            for (auto& [sig, base] : sigs) std::sort(sig.begin(), sig.end());
            return sigs;
        };
        auto s1 = signature(l1, ctx.side1, c1);
        auto s2 = signature(l2, ctx.side2, c2);

        std::vector<std::pair<Signature, int>> dictionary;
        for (const auto& s : s1) dictionary.push_back(s);
        for (const auto& s : s2) dictionary.push_back(s);
        std::sort(dictionary.begin(), dictionary.end());
        dictionary.erase(std::unique(dictionary.begin(), dictionary.end()), dictionary.end());

        auto recolor = [&](const std::vector<std::pair<Signature, int>>& sigs,
                           std::vector<int>& colors) {
            for (std::size_t i = 0; i < sigs.size(); ++i)
                colors[i] = static_cast<int>(
                    std::lower_bound(dictionary.begin(), dictionary.end(), sigs[i]) -
                    dictionary.begin());
        };
        std::vector<int> n1 = c1, n2 = c2;
        recolor(s1, n1);
        recolor(s2, n2);
        if (n1 == c1 && n2 == c2) break;
        c1 = std::move(n1);
        c2 = std::move(n2);
    }
    return {c1, c2};
}

} // namespace

std::optional<IsoWitness> fair_graph_isomorphic(const FairGraph& l1, const FairGraph& l2,
                                                double tol) {
    if (!l1.base || !l2.base || !same_gamma(*l1.base, *l2.base))
        throw std::invalid_argument("fair_graph_isomorphic: base graphs differ");
    if (!validate_fair_graph(l1).ok() || !validate_fair_graph(l2).ok())
        throw std::invalid_argument("fair_graph_isomorphic: structurally invalid input");
    if (l1.vertices.size() != l2.vertices.size() || l1.edges.size() != l2.edges.size())
        return std::nullopt;

    IsoContext ctx{l1, l2, tol, {}, {}, cluster_weights(l1, l2, tol), {}, {}};
    {
        std::vector<std::string> vids, eids;
        for (const auto& v : l1.base->vertices) vids.push_back(v);
        for (const auto& e : l1.base->edges) eids.push_back(e.id);
        std::sort(vids.begin(), vids.end());
        std::sort(eids.begin(), eids.end());
        for (std::size_t i = 0; i < vids.size(); ++i)
            ctx.pi_vertex_index[vids[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < eids.size(); ++i)
            ctx.pi_edge_index[eids[i]] = static_cast<int>(i);
    }
    build_side(ctx, l1, ctx.side1);
    build_side(ctx, l2, ctx.side2);

    auto [c1, c2] = refine_colors(ctx);

    // Color class sizes must agree.
    std::map<int, int> count1, count2;
    for (int c : c1) ++count1[c];
    for (int c : c2) ++count2[c];
    if (count1 != count2) return std::nullopt;

    const std::size_t n = ctx.side1.vertex_ids.size();
    std::vector<int> order;
    {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            int ca = count1[c1[a]], cb = count1[c1[b]];
            if (ca != cb) return ca < cb;
            return ctx.side1.vertex_ids[a] < ctx.side1.vertex_ids[b];
        });
        for (std::size_t i : idx) order.push_back(static_cast<int>(i));
    }

    std::vector<int> assignment(n, -1);
    std::vector<bool> used(n, false);

    auto pair_consistent = [&](int a, int b) {
        // Edge multisets between a and every assigned vertex must transfer.
        const auto& av = ctx.side1.vertex_ids[static_cast<std::size_t>(a)];
        const auto& bv = ctx.side2.vertex_ids[static_cast<std::size_t>(b)];
        for (std::size_t other = 0; other < n; ++other) {
            int img = assignment[other];
            if (img < 0 && static_cast<int>(other) != a) continue;
            const auto& ov = ctx.side1.vertex_ids[other];
            const auto& iv = (static_cast<int>(other) == a)
                                 ? bv
                                 : ctx.side2.vertex_ids[static_cast<std::size_t>(img)];
            static const std::vector<std::tuple<int, double, std::string>> kEmpty;
            auto fetch = [](const IsoContext::Side& side, const std::string& x,
                            const std::string& y)
                -> const std::vector<std::tuple<int, double, std::string>>& {
                auto it = side.between.find({x, y});
                return it == side.between.end() ? kEmpty : it->second;
            };
            if (!multisets_match(fetch(ctx.side1, av, ov), fetch(ctx.side2, bv, iv), tol))
                return false;
            if (!multisets_match(fetch(ctx.side1, ov, av), fetch(ctx.side2, iv, bv), tol))
                return false;
        }
        return true;
    };

    std::function<bool(std::size_t)> search = [&](std::size_t depth) {
        if (depth == n) return true;
        int a = order[depth];
        for (std::size_t b = 0; b < n; ++b) {
            if (used[b] || c2[b] != c1[static_cast<std::size_t>(a)]) continue;
            if (!pair_consistent(a, static_cast<int>(b))) continue;
            assignment[static_cast<std::size_t>(a)] = static_cast<int>(b);
            used[b] = true;
            if (search(depth + 1)) return true;
            assignment[static_cast<std::size_t>(a)] = -1;
            used[b] = false;
        }
        return false;
    };
    if (!search(0)) return std::nullopt;

    IsoWitness witness;
    for (std::size_t i = 0; i < n; ++i)
        witness.vertex_map[ctx.side1.vertex_ids[i]] =
            ctx.side2.vertex_ids[static_cast<std::size_t>(assignment[i])];
    // Parallel edges: zip per (pair, projection) sorted by (weight, id).
    for (const auto& [pair, edges1] : ctx.side1.between) {
        const auto& image_pair = std::make_pair(witness.vertex_map.at(pair.first),
                                                witness.vertex_map.at(pair.second));
        const auto& edges2 = ctx.side2.between.at(image_pair);
        for (std::size_t i = 0; i < edges1.size(); ++i)
            witness.edge_map[std::get<2>(edges1[i])] = std::get<2>(edges2[i]);
    }
    return witness;
}

bool solutions_equivalent(const FundamentalSolution& s, const FundamentalSolution& t,
                          double tol) {
    if (!s.base || !t.base || !same_gamma(*s.base, *t.base))
        throw std::invalid_argument("solutions_equivalent: base graphs differ");
    FairGraph ls = graph_from_solution(s, tol);
    FairGraph lt = graph_from_solution(t, tol);
    return fair_graph_isomorphic(ls, lt, tol).has_value();
}

bool verify_equivalence_witness(const FundamentalSolution& s, const FundamentalSolution& t,
                                const std::map<BlockKey, Matrix>& u,
                                const std::map<std::string, std::map<std::string, std::string>>&
                                    vertex_bijections,
                                double tol) {
    if (!s.base || !t.base || !same_gamma(*s.base, *t.base))
        throw std::invalid_argument("verify_equivalence_witness: base graphs differ");
    if (!validate_solution(s).ok() || !validate_solution(t).ok())
        throw std::invalid_argument("verify_equivalence_witness: ill-formed solution");
    const BiGraph& g = *s.base;

    auto image = [&](const std::string& a, const std::string& v) -> const std::string& {
        auto ait = vertex_bijections.find(a);
        if (ait == vertex_bijections.end())
            throw std::invalid_argument("verify_equivalence_witness: no bijection at '" + a + "'");
        auto vit = ait->second.find(v);
        if (vit == ait->second.end())
            throw std::invalid_argument("verify_equivalence_witness: index '" + v +
                                        "' not in the bijection at '" + a + "'");
        return vit->second;
    };
    auto unitary_at = [&](const BlockKey& key, Eigen::Index dim) -> const Matrix& {
        auto it = u.find(key);
        if (it == u.end())
            throw std::invalid_argument("verify_equivalence_witness: missing unitary at (" +
                                        key.edge + ", " + key.v + ", " + key.w + ")");
        if (it->second.rows() != dim || it->second.cols() != dim ||
            unitarity_defect(it->second) > 1e-10)
            throw std::invalid_argument("verify_equivalence_witness: block at (" + key.edge +
                                        ", " + key.v + ", " + key.w + ") is not unitary");
        return it->second;
    };

    if (s.cups.size() != t.cups.size())
        throw std::invalid_argument("verify_equivalence_witness: block structures differ");

    for (const auto& [key, cup] : s.cups) {
        const GammaEdge& e = g.edge(key.edge);
        const std::string& fv = image(e.source, key.v);
        const std::string& fw = image(e.target, key.w);
        const Matrix* tcup = t.find_cup(BlockKey{key.edge, fv, fw});
        if (!tcup || tcup->rows() != cup.rows())
            throw std::invalid_argument("verify_equivalence_witness: shapes incompatible at (" +
                                        key.edge + ", " + key.v + ", " + key.w + ")");
        Matrix phi = cup.transpose();
        Matrix psi = tcup->transpose();
        const Matrix& ue = unitary_at(key, cup.rows());
        const Matrix& ud = unitary_at(BlockKey{e.dual, key.w, key.v}, cup.rows());
        // Antilinear conjugation in coordinates: Phi = U^ebar Psi (U^e)^T.
        Matrix expected = ud * psi * ue.transpose();
        if (operator_norm(phi - expected) > tol) return false;
    }
    return true;
}

MwResult check_mw_type_report(const FairGraph& l, double tol) {
    if (!check_fair(l, tol).ok())
        throw std::invalid_argument("check_mw_type: input is not fair");
    if (!balance_involution(l, tol).involution)
        throw std::invalid_argument("check_mw_type: input is not balanced");
    const BiGraph& g = *l.base;

    MwResult result;
    std::vector<std::string> vertex_ids;
    for (const auto& v : l.vertices) vertex_ids.push_back(v.id);
    std::sort(vertex_ids.begin(), vertex_ids.end());
    std::vector<const FairEdge*> edges;
    for (const auto& e : l.edges) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(),
              [](const FairEdge* a, const FairEdge* b) { return a->id < b->id; });

    std::map<std::string, double> d;
    std::set<std::string> tree;
    for (const auto& root : vertex_ids) {
        if (d.count(root)) continue;
        d[root] = 1.0; // d is defined up to a scale per component
        bool changed = true;
        while (changed) {
            changed = false;
            for (const FairEdge* e : edges) {
                bool has_src = d.count(e->source), has_dst = d.count(e->target);
                if (has_src == has_dst) continue;
                if (has_src)
                    d[e->target] = d[e->source] * e->weight;
                else
                    d[e->source] = d[e->target] / e->weight;
                tree.insert(e->id);
                changed = true;
            }
        }
    }

    for (const FairEdge* e : edges) {
        if (tree.count(e->id)) continue;
        double ratio = d.at(e->target) / d.at(e->source);
        if (std::abs(ratio - e->weight) > tol * std::max(1.0, e->weight)) {
            double product = e->weight * d.at(e->source) / d.at(e->target);
            std::ostringstream msg;
            msg << "cycle closing through edge '" << e->id << "' has weight product " << product
                << " != 1";
            result.report.fail("MW_CYCLE", {e->id}, msg.str());
            result.witness_edge = e->id;
            result.witness_product = product;
            return result;
        }
    }

    // Self-check: both Perron-Frobenius sum conditions of the dimension data.
    const double sum_tol = std::max(tol, 1e-9);
    for (const auto& e : g.edges) {
        for (const auto& v : l.vertices) {
            if (v.pi == e.source) {
                double sum = 0.0;
                for (const FairEdge* eps : edges)
                    if (eps->source == v.id && eps->pi == e.id)
                        sum += d.at(eps->target) / d.at(eps->source);
                if (std::abs(sum - e.weight) > sum_tol * std::max(1.0, e.weight)) {
                    result.report.fail("MW_SUM", {v.id, e.id},
                                       "outgoing dimension ratios do not sum to delta");
                    return result;
                }
            }
            if (v.pi == e.target) {
                double sum = 0.0;
                for (const FairEdge* eps : edges)
                    if (eps->target == v.id && eps->pi == e.id)
                        sum += d.at(eps->source) / d.at(eps->target);
                if (std::abs(sum - e.weight) > sum_tol * std::max(1.0, e.weight)) {
                    result.report.fail("MW_SUM", {v.id, e.id},
                                       "incoming dimension ratios do not sum to delta");
                    return result;
                }
            }
        }
    }

    DimensionFunction dims;
    dims.d = std::move(d);
    result.dims = std::move(dims);
    return result;
}

std::optional<DimensionFunction> check_mw_type(const FairGraph& l, double tol) {
    return check_mw_type_report(l, tol).dims;
}

} // namespace tlj
