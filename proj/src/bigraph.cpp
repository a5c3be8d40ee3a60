#include "tlj/bigraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

bool BiGraph::has_vertex(const std::string& id) const {
    return std::find(vertices.begin(), vertices.end(), id) != vertices.end();
}

const GammaEdge* BiGraph::find_edge(const std::string& id) const {
    for (const auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

const GammaEdge& BiGraph::edge(const std::string& id) const {
    const GammaEdge* e = find_edge(id);
    if (!e) throw std::invalid_argument("unknown edge id: " + id);
    return *e;
}

const std::string& BiGraph::dual_of(const std::string& id) const { return edge(id).dual; }

double BiGraph::weight_of(const std::string& id) const { return edge(id).weight; }

BiGraph canonical(const BiGraph& g) {
    BiGraph out = g;
    std::sort(out.vertices.begin(), out.vertices.end());
    std::sort(out.edges.begin(), out.edges.end(),
              [](const GammaEdge& a, const GammaEdge& b) { return a.id < b.id; });
    return out;
}

bool same_gamma(const BiGraph& a, const BiGraph& b) { return canonical(a) == canonical(b); }

ValidationReport validate_bigraph(const BiGraph& g) {
    ValidationReport report;

    std::set<std::string> vertex_ids;
    for (const auto& v : g.vertices) {
        if (!vertex_ids.insert(v).second)
            report.fail("DUPLICATE_ID", {v}, "duplicate vertex id '" + v + "'");
    }

    std::map<std::string, const GammaEdge*> by_id;
    for (const auto& e : g.edges) {
        if (!by_id.emplace(e.id, &e).second)
            report.fail("DUPLICATE_ID", {e.id}, "duplicate edge id '" + e.id + "'");
    }

    for (const auto& e : g.edges) {
        if (!vertex_ids.count(e.source))
            report.fail("DANGLING_REFERENCE", {e.id, e.source},
                        "edge '" + e.id + "' has unknown source '" + e.source + "'");
        if (!vertex_ids.count(e.target))
            report.fail("DANGLING_REFERENCE", {e.id, e.target},
                        "edge '" + e.id + "' has unknown target '" + e.target + "'");
        if (!(e.weight > 0.0))
            report.fail("NONPOSITIVE_WEIGHT", {e.id},
                        "edge '" + e.id + "' has nonpositive weight");

        auto it = by_id.find(e.dual);
        if (it == by_id.end()) {
            report.fail("DANGLING_REFERENCE", {e.id, e.dual},
                        "edge '" + e.id + "' names unknown dual '" + e.dual + "'");
            continue;
        }
        const GammaEdge& d = *it->second;
        if (d.dual != e.id)
            report.fail("DUAL_NOT_INVOLUTION", {e.id, e.dual},
                        "dual(dual('" + e.id + "')) = '" + d.dual + "' != '" + e.id + "'");
        if (d.source != e.target || d.target != e.source)
            report.fail("DUAL_ENDPOINT_MISMATCH", {e.id, e.dual},
                        "dual of '" + e.id + "' does not reverse source and target");
        // Exact bit equality: the dual pair is authored data, not computed.
        if (d.weight != e.weight)
            report.fail("DUAL_WEIGHT_MISMATCH", {e.id, e.dual},
                        "weight(" + e.id + ") != weight(" + e.dual + ")");
    }

    return report;
}

bool is_connected(const BiGraph& g) {
    if (!validate_bigraph(g).ok())
        throw std::invalid_argument("is_connected: input fails validate_bigraph");
    if (g.vertices.empty()) return false;

    std::map<std::string, std::vector<std::string>> adjacency;
    for (const auto& e : g.edges) {
        adjacency[e.source].push_back(e.target);
        adjacency[e.target].push_back(e.source);
    }
    std::set<std::string> seen{g.vertices.front()};
    std::vector<std::string> stack{g.vertices.front()};
    while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        for (const auto& w : adjacency[v])
            if (seen.insert(w).second) stack.push_back(w);
    }
    return seen.size() == g.vertices.size();
}

BiGraph standard_gamma(StandardGamma kind, const std::vector<double>& weights) {
    auto expect = [&](std::size_t n) {
        if (weights.size() != n) {
            std::ostringstream msg;
            msg << "standard_gamma: expected " << n << " weight(s), got " << weights.size();
            throw std::invalid_argument(msg.str());
        }
        for (double w : weights)
            if (!(w > 0.0)) throw std::invalid_argument("standard_gamma: weights must be positive");
    };

    BiGraph g;
    switch (kind) {
    case StandardGamma::Unoriented:
        expect(1);
        g.vertices = {"v"};
        g.edges = {{"e", "v", "v", weights[0], "e"}};
        break;
    case StandardGamma::Oriented:
        expect(1);
        g.vertices = {"v"};
        g.edges = {{"e", "v", "v", weights[0], "eb"},
                   {"eb", "v", "v", weights[0], "e"}};
        break;
    case StandardGamma::TwoColor:
        expect(2);
        g.vertices = {"v"};
        g.edges = {{"r", "v", "v", weights[0], "r"},
                   {"b", "v", "v", weights[1], "b"}};
        break;
    case StandardGamma::Shaded:
        expect(1);
        g.vertices = {"white", "shaded"};
        g.edges = {{"e", "white", "shaded", weights[0], "eb"},
                   {"eb", "shaded", "white", weights[0], "e"}};
        break;
    }
    return g;
}

} // namespace tlj
