#include "tlj/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

namespace {

std::string pad2(int n) {
    std::ostringstream s;
    if (n < 10) s << '0';
    s << n;
    return s.str();
}

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

} // namespace

BiGraph fixture_gamma1() {
    BiGraph g;
    g.vertices = {"white", "grey", "shaded"};
    g.edges = {
        {"wl0", "white", "white", 1.0, "wl1"},
        {"wl1", "white", "white", 1.0, "wl0"},
        {"wg0", "white", "grey", 2.0, "wg1"},
        {"wg1", "grey", "white", 2.0, "wg0"},
        {"gs0", "grey", "shaded", 2.0, "gs1"},
        {"gs1", "shaded", "grey", 2.0, "gs0"},
        {"sb", "shaded", "shaded", 2.0, "sb"},
        {"sk", "shaded", "shaded", 1.0, "sk"},
    };
    return g;
}

FairGraph family_a_path(BiGraphPtr g, int n) {
    require(static_cast<bool>(g), "family_a_path: null base graph");
    require(n >= 2 && n <= 99, "family_a_path: n must be in [2, 99]");
    require(g->vertices.size() == 1 && g->edges.size() == 1 &&
                g->edges[0].dual == g->edges[0].id,
            "family_a_path: base must be a single vertex with one self-dual loop");
    const GammaEdge& loop = g->edges[0];
    const double theta = std::numbers::pi / (n + 1);
    require(std::abs(loop.weight - 2.0 * std::cos(theta)) <= 1e-9,
            "family_a_path: loop weight must equal 2cos(pi/(n+1))");

    auto d = [&](int i) { return std::sin(i * theta); };

    FairGraph l;
    l.base = g;
    for (int i = 1; i <= n; ++i) l.vertices.push_back({"v" + pad2(i), loop.source});
    for (int i = 1; i < n; ++i) {
        l.edges.push_back({"f" + pad2(i), "v" + pad2(i), "v" + pad2(i + 1),
                           d(i + 1) / d(i), loop.id});
        l.edges.push_back({"r" + pad2(i), "v" + pad2(i + 1), "v" + pad2(i),
                           d(i) / d(i + 1), loop.id});
    }
    return l;
}

FairGraph family_two_vertex_reciprocal(BiGraphPtr g, double a) {
    require(static_cast<bool>(g), "family_two_vertex_reciprocal: null base graph");
    require(a > 0.0, "family_two_vertex_reciprocal: parameter must be positive");
    require(g->vertices.size() == 1 && g->edges.size() == 2 &&
                g->edges[0].dual != g->edges[0].id,
            "family_two_vertex_reciprocal: base must be a single vertex with a dual loop pair");
    const GammaEdge& e0 = (g->edges[0].id < g->edges[1].id) ? g->edges[0] : g->edges[1];
    const std::string e = e0.id;
    const std::string eb = e0.dual;
    require(std::abs(e0.weight - (a + 1.0 / a)) <= 1e-9,
            "family_two_vertex_reciprocal: loop weight must equal a + 1/a");

    const std::string vtx = g->vertices[0];
    FairGraph l;
    l.base = g;
    l.vertices = {{"v", vtx}, {"w", vtx}};
    // Cross edges sort before loops so the first witness cycle of the MW
    // check is the two-step v -> w -> v cycle.
    l.edges = {
        {"c0", "v", "w", 1.0 / a, e},  {"c1", "w", "v", 1.0 / a, e},
        {"c2", "v", "w", a, eb},       {"c3", "w", "v", a, eb},
        {"l0", "v", "v", a, e},        {"l1", "v", "v", 1.0 / a, eb},
        {"l2", "w", "w", a, e},        {"l3", "w", "w", 1.0 / a, eb},
    };
    return l;
}

FairGraph family_cover(const FairGraph& l, int sheets) {
    require(sheets >= 2, "family_cover: need at least two sheets");
    auto inv = find_balanced_involution(l, 1e-9);
    require(inv.has_value(), "family_cover: input has no balanced involution");

    std::string shifted;
    for (const auto& [id, partner_id] : inv->pairing) {
        if (partner_id != id) {
            shifted = id; // pairing map is ordered, so this is the smallest id
            break;
        }
    }
    require(!shifted.empty(), "family_cover: no non-fixed dual pair to shift");
    const std::string partner = inv->pairing.at(shifted);

    auto copy_id = [](const std::string& id, int k) { return id + "#" + std::to_string(k); };

    FairGraph out;
    out.base = l.base;
    for (int k = 0; k < sheets; ++k)
        for (const auto& v : l.vertices) out.vertices.push_back({copy_id(v.id, k), v.pi});
    for (int k = 0; k < sheets; ++k) {
        for (const auto& e : l.edges) {
            FairEdge c = e;
            c.id = copy_id(e.id, k);
            if (e.id == shifted) {
                c.source = copy_id(e.source, k);
                c.target = copy_id(e.target, (k + 1) % sheets);
            } else if (e.id == partner) {
                c.source = copy_id(e.source, (k + 1) % sheets);
                c.target = copy_id(e.target, k);
            } else {
                c.source = copy_id(e.source, k);
                c.target = copy_id(e.target, k);
            }
            out.edges.push_back(std::move(c));
        }
    }
    return out;
}

FairGraph family_relabel(const FairGraph& l, std::uint64_t seed) {
    std::mt19937_64 rng(seed);

    std::vector<std::string> vertex_ids, edge_ids;
    for (const auto& v : l.vertices) vertex_ids.push_back(v.id);
    for (const auto& e : l.edges) edge_ids.push_back(e.id);
    std::sort(vertex_ids.begin(), vertex_ids.end());
    std::sort(edge_ids.begin(), edge_ids.end());

    std::vector<int> vperm(vertex_ids.size()), eperm(edge_ids.size());
    for (std::size_t i = 0; i < vperm.size(); ++i) vperm[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < eperm.size(); ++i) eperm[i] = static_cast<int>(i);
    std::shuffle(vperm.begin(), vperm.end(), rng);
    std::shuffle(eperm.begin(), eperm.end(), rng);

    std::map<std::string, std::string> vmap, emap;
    for (std::size_t i = 0; i < vertex_ids.size(); ++i)
        vmap[vertex_ids[i]] = "x" + pad2(vperm[i]);
    for (std::size_t i = 0; i < edge_ids.size(); ++i)
        emap[edge_ids[i]] = "y" + pad2(eperm[i]);

    FairGraph out;
    out.base = l.base;
    for (const auto& v : l.vertices) out.vertices.push_back({vmap.at(v.id), v.pi});
    for (const auto& e : l.edges)
        out.edges.push_back({emap.at(e.id), vmap.at(e.source), vmap.at(e.target), e.weight, e.pi});
    return out;
}

FairGraph integer_cover(BiGraphPtr g, int sheets) {
    require(static_cast<bool>(g), "integer_cover: null base graph");
    require(sheets >= 1, "integer_cover: need at least one sheet");

    auto multiplicity = [](const GammaEdge& e) {
        double r = std::round(e.weight);
        require(r >= 1.0 && std::abs(e.weight - r) <= 1e-9,
                "integer_cover: edge '" + e.id + "' has non-integer weight");
        return static_cast<int>(r);
    };
    auto sheet_vertex = [](const std::string& a, int i) {
        return a + "." + std::to_string(i);
    };

    FairGraph l;
    l.base = g;
    for (const auto& a : g->vertices)
        for (int i = 0; i < sheets; ++i) l.vertices.push_back({sheet_vertex(a, i), a});

    std::set<std::string> seen;
    for (const auto& e : g->edges) {
        if (seen.count(e.id)) continue;
        seen.insert(e.id);
        seen.insert(e.dual);
        const int k = multiplicity(e);
        auto edge_id = [](const std::string& base, int i, int j) {
            return base + "." + std::to_string(i) + "." + std::to_string(j);
        };
        if (e.dual == e.id) {
            for (int i = 0; i < sheets; ++i)
                for (int j = 0; j < k; ++j)
                    l.edges.push_back({edge_id(e.id, i, j), sheet_vertex(e.source, i),
                                       sheet_vertex(e.source, i), 1.0, e.id});
        } else {
            for (int i = 0; i < sheets; ++i)
                for (int j = 0; j < k; ++j) {
                    const int t = (i + j) % sheets;
                    l.edges.push_back({edge_id(e.id, i, j), sheet_vertex(e.source, i),
                                       sheet_vertex(e.target, t), 1.0, e.id});
                    l.edges.push_back({edge_id(e.dual, i, j), sheet_vertex(e.target, t),
                                       sheet_vertex(e.source, i), 1.0, e.dual});
                }
        }
    }
    return l;
}

FairGraph fixture_lambda1(BiGraphPtr gamma1) { return integer_cover(std::move(gamma1), 2); }

} // namespace tlj
