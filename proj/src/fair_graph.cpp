#include "tlj/fair_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

const FairVertex* FairGraph::find_vertex(const std::string& id) const {
    for (const auto& v : vertices)
        if (v.id == id) return &v;
    return nullptr;
}

const FairEdge* FairGraph::find_edge(const std::string& id) const {
    for (const auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

ValidationReport validate_fair_graph(const FairGraph& l) {
    ValidationReport report;
    if (!l.base) {
        report.fail("DANGLING_REFERENCE", {}, "fair graph has no base graph");
        return report;
    }
    const BiGraph& g = *l.base;

    std::map<std::string, const FairVertex*> by_id;
    for (const auto& v : l.vertices) {
        if (!by_id.emplace(v.id, &v).second)
            report.fail("DUPLICATE_ID", {v.id}, "duplicate vertex id '" + v.id + "'");
        if (!g.has_vertex(v.pi))
            report.fail("DANGLING_REFERENCE", {v.id, v.pi},
                        "vertex '" + v.id + "' projects to unknown '" + v.pi + "'");
    }
    std::set<std::string> edge_ids;
    for (const auto& e : l.edges) {
        if (!edge_ids.insert(e.id).second)
            report.fail("DUPLICATE_ID", {e.id}, "duplicate edge id '" + e.id + "'");
        auto src = by_id.find(e.source);
        auto dst = by_id.find(e.target);
        if (src == by_id.end() || dst == by_id.end()) {
            report.fail("DANGLING_REFERENCE", {e.id},
                        "edge '" + e.id + "' references unknown endpoints");
            continue;
        }
        if (!(e.weight > 0.0))
            report.fail("NONPOSITIVE_WEIGHT", {e.id},
                        "edge '" + e.id + "' has nonpositive weight");
        const GammaEdge* pe = g.find_edge(e.pi);
        if (!pe) {
            report.fail("DANGLING_REFERENCE", {e.id, e.pi},
                        "edge '" + e.id + "' projects to unknown '" + e.pi + "'");
            continue;
        }
        if (src->second->pi != pe->source || dst->second->pi != pe->target)
            report.fail("HOMOMORPHISM", {e.id, e.pi},
                        "projection of edge '" + e.id +
                            "' does not commute with endpoints");
    }
    return report;
}

ValidationReport check_fair(const FairGraph& l, double tol) {
    if (!validate_fair_graph(l).ok())
        throw std::invalid_argument("check_fair: structurally invalid fair graph");
    const BiGraph& g = *l.base;
    ValidationReport report;

    for (const auto& a : g.vertices) {
        bool fiber_empty = true;
        for (const auto& v : l.vertices)
            if (v.pi == a) fiber_empty = false;
        if (fiber_empty)
            report.warn("EMPTY_FIBER", {a}, "no vertex projects to '" + a + "'");
    }

    for (const auto& e : g.edges) {
        for (const auto& v : l.vertices) {
            if (v.pi != e.source) continue;
            double sum = 0.0;
            for (const auto& eps : l.edges)
                if (eps.source == v.id && eps.pi == e.id) sum += eps.weight;
            double residual = std::abs(sum - e.weight);
            if (residual > tol) {
                std::ostringstream msg;
                msg << "outgoing weights over fiber of '" << e.id << "' at vertex '" << v.id
                    << "' sum to " << sum << ", expected " << e.weight << " (residual "
                    << residual << ")";
                report.fail("FAIRNESS", {v.id, e.id}, msg.str());
            }
        }
    }
    return report;
}

namespace {

struct WeightGroup {
    std::string source, target, pi;
    double weight = 0.0; // class representative
    std::vector<std::string> ids;
};

bool weights_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

std::vector<WeightGroup> group_edges(const FairGraph& l, double tol) {
    std::map<std::tuple<std::string, std::string, std::string>,
             std::vector<std::pair<double, std::string>>>
        cells;
    for (const auto& e : l.edges)
        cells[{e.source, e.target, e.pi}].push_back({e.weight, e.id});

    std::vector<WeightGroup> groups;
    for (auto& [key, members] : cells) {
        std::sort(members.begin(), members.end());
        WeightGroup current;
        for (const auto& [w, id] : members) {
            if (current.ids.empty() || !weights_close(current.weight, w, tol)) {
                if (!current.ids.empty()) groups.push_back(current);
                current = WeightGroup{std::get<0>(key), std::get<1>(key), std::get<2>(key), w, {}};
            }
            current.ids.push_back(id);
        }
        if (!current.ids.empty()) groups.push_back(current);
    }
    for (auto& g : groups) std::sort(g.ids.begin(), g.ids.end());
    return groups;
}

} // namespace

BalanceResult balance_involution(const FairGraph& l, double tol) {
    if (!validate_fair_graph(l).ok())
        throw std::invalid_argument("balance_involution: structurally invalid fair graph");
    const BiGraph& g = *l.base;

    BalanceResult result;
    std::vector<WeightGroup> groups = group_edges(l, tol);

    auto find_partner = [&](const WeightGroup& k) -> int {
        const std::string dual_pi = g.dual_of(k.pi);
        double want = 1.0 / k.weight;
        int best = -1;
        double best_gap = 0.0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const WeightGroup& c = groups[i];
            if (c.source != k.target || c.target != k.source || c.pi != dual_pi) continue;
            double gap = std::abs(c.weight - want);
            if (!weights_close(want, c.weight, tol)) continue;
            if (best < 0 || gap < best_gap) {
                best = static_cast<int>(i);
                best_gap = gap;
            }
        }
        return best;
    };

    std::map<std::string, std::string> pairing;
    std::vector<bool> done(groups.size(), false);
    bool balanced = true;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (done[i]) continue;
        const WeightGroup& k = groups[i];
        int pj = find_partner(k);
        if (pj < 0) {
            std::ostringstream msg;
            msg << "group (" << k.source << " -> " << k.target << ", " << k.pi << ", weight "
                << k.weight << ", " << k.ids.size() << " edge(s)) has no reciprocal partner";
            result.report.fail("BALANCE_GROUP", {k.source, k.target, k.pi}, msg.str());
            balanced = false;
            done[i] = true;
            continue;
        }
        const WeightGroup& p = groups[static_cast<std::size_t>(pj)];
        if (static_cast<std::size_t>(pj) == i) {
            // Self-partner group: loops on a self-dual Gamma edge with
            // weight 1; pair internally, fixing one leftover when odd.
            done[i] = true;
            const auto& ids = k.ids;
            std::size_t q = 0;
            for (; q + 1 < ids.size(); q += 2) {
                pairing[ids[q]] = ids[q + 1];
                pairing[ids[q + 1]] = ids[q];
            }
            if (q < ids.size()) pairing[ids[q]] = ids[q];
            continue;
        }
        if (p.ids.size() != k.ids.size()) {
            std::ostringstream msg;
            msg << "group (" << k.source << " -> " << k.target << ", " << k.pi << ", weight "
                << k.weight << ") has " << k.ids.size() << " edge(s) but its partner (weight "
                << p.weight << ") has " << p.ids.size();
            result.report.fail("BALANCE_GROUP", {k.source, k.target, k.pi}, msg.str());
            balanced = false;
            done[i] = true;
            done[static_cast<std::size_t>(pj)] = true;
            continue;
        }
        done[i] = true;
        done[static_cast<std::size_t>(pj)] = true;
        for (std::size_t q = 0; q < k.ids.size(); ++q) {
            pairing[k.ids[q]] = p.ids[q];
            pairing[p.ids[q]] = k.ids[q];
        }
    }

    if (balanced) result.involution = BalancedInvolution{std::move(pairing)};
    return result;
}

std::optional<BalancedInvolution> find_balanced_involution(const FairGraph& l, double tol) {
    if (!check_fair(l, tol).ok())
        throw std::invalid_argument("find_balanced_involution: input is not fair");
    return balance_involution(l, tol).involution;
}

ValidationReport validate_involution(const FairGraph& l, const BalancedInvolution& inv,
                                     double tol) {
    ValidationReport report;
    const BiGraph& g = *l.base;
    for (const auto& e : l.edges) {
        auto it = inv.pairing.find(e.id);
        if (it == inv.pairing.end()) {
            report.fail("INVOLUTION_TOTAL", {e.id}, "edge '" + e.id + "' is unpaired");
            continue;
        }
        const FairEdge* partner = l.find_edge(it->second);
        if (!partner) {
            report.fail("DANGLING_REFERENCE", {e.id, it->second},
                        "pairing image is not an edge");
            continue;
        }
        auto back = inv.pairing.find(partner->id);
        if (back == inv.pairing.end() || back->second != e.id)
            report.fail("INVOLUTION_SQUARE", {e.id, partner->id},
                        "pairing is not an involution at '" + e.id + "'");
        if (partner->source != e.target || partner->target != e.source)
            report.fail("INVOLUTION_REVERSAL", {e.id, partner->id},
                        "pairing does not reverse source and target");
        double product = e.weight * partner->weight;
        if (std::abs(product - 1.0) > tol * std::max(1.0, std::abs(product)))
            report.fail("INVOLUTION_WEIGHT", {e.id, partner->id},
                        "weight product differs from 1");
        if (g.dual_of(e.pi) != partner->pi)
            report.fail("INVOLUTION_PROJECTION", {e.id, partner->id},
                        "pairing does not intertwine the projections");
    }
    return report;
}

} // namespace tlj
