#include "tlj/diagram.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlj {

GammaPath empty_path(std::string at_vertex) {
    GammaPath p;
    p.at = std::move(at_vertex);
    return p;
}

GammaPath path_of(const BiGraph& g, std::vector<std::string> edge_ids) {
    GammaPath p;
    p.edges = std::move(edge_ids);
    if (!p.edges.empty()) p.at = g.edge(p.edges.front()).source;
    if (!valid_path(g, p)) throw std::invalid_argument("path_of: edges do not compose");
    return p;
}

bool valid_path(const BiGraph& g, const GammaPath& p) {
    if (p.empty()) return g.has_vertex(p.at);
    for (const auto& id : p.edges)
        if (!g.find_edge(id)) return false;
    if (p.at != g.edge(p.edges.front()).source) return false;
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i)
        if (g.edge(p.edges[i]).target != g.edge(p.edges[i + 1]).source) return false;
    return true;
}

std::string domain_vertex(const BiGraph& g, const GammaPath& p) {
    return p.empty() ? p.at : g.edge(p.edges.front()).source;
}

std::string codomain_vertex(const BiGraph& g, const GammaPath& p) {
    return p.empty() ? p.at : g.edge(p.edges.back()).target;
}

void Diagram::canonicalize() { std::sort(arcs.begin(), arcs.end()); }

Diagram make_cup(const BiGraph& g, const std::string& edge_id) {
    const GammaEdge& e = g.edge(edge_id);
    Diagram d;
    d.bottom = empty_path(e.source);
    d.top.edges = {e.id, e.dual};
    d.top.at = e.source;
    d.arcs = {Arc{{Side::Top, 0}, {Side::Top, 1}}};
    return d;
}

Diagram make_cap(const BiGraph& g, const std::string& edge_id) {
    const GammaEdge& e = g.edge(edge_id);
    Diagram d;
    d.bottom.edges = {e.id, e.dual};
    d.bottom.at = e.source;
    d.top = empty_path(e.source);
    d.arcs = {Arc{{Side::Bottom, 0}, {Side::Bottom, 1}}};
    return d;
}

Diagram identity_diagram(const BiGraph& g, const GammaPath& p) {
    if (!valid_path(g, p)) throw std::invalid_argument("identity_diagram: invalid path");
    Diagram d;
    d.bottom = p;
    d.top = p;
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        d.arcs.push_back(Arc{{Side::Bottom, i}, {Side::Top, i}});
    return d;
}

namespace {

const std::string& label_at(const Diagram& d, Point p) {
    const GammaPath& path = (p.side == Side::Bottom) ? d.bottom : d.top;
    return path.edges[static_cast<std::size_t>(p.index)];
}

// Reduction order of the same-side arcs on one side: repeatedly delete an
// arc whose endpoints are adjacent among the still-alive positions, leftmost
// first. Returns false if blocked arcs remain (a crossing).
struct Removal {
    int left = 0, right = 0; // original indices
    int rank = 0;            // alive-rank of the left endpoint at removal time
};

bool reduce_same_side(int path_length, std::vector<std::pair<int, int>> side_arcs,
                      std::vector<bool>& alive, std::vector<Removal>* order) {
    alive.assign(static_cast<std::size_t>(path_length), true);
    std::vector<bool> done(side_arcs.size(), false);
    std::sort(side_arcs.begin(), side_arcs.end());
    std::size_t remaining = side_arcs.size();
    while (remaining > 0) {
        bool removed_one = false;
        for (std::size_t k = 0; k < side_arcs.size(); ++k) {
            if (done[k]) continue;
            auto [i, j] = side_arcs[k];
            bool adjacent = true;
            for (int q = i + 1; q < j && adjacent; ++q)
                if (alive[static_cast<std::size_t>(q)]) adjacent = false;
            if (!adjacent) continue;
            if (order) {
                Removal r;
                r.left = i;
                r.right = j;
                r.rank = static_cast<int>(std::count(alive.begin(), alive.begin() + i, true));
                order->push_back(r);
            }
            alive[static_cast<std::size_t>(i)] = false;
            alive[static_cast<std::size_t>(j)] = false;
            done[k] = true;
            --remaining;
            removed_one = true;
            break; // restart scan: leftmost removable first
        }
        if (!removed_one) return false;
    }
    return true;
}

} // namespace

ValidationReport validate_diagram(const BiGraph& g, const Diagram& d) {
    ValidationReport report;

    if (!valid_path(g, d.bottom) || !valid_path(g, d.top)) {
        report.fail("PATH_INVALID", {}, "bottom or top is not a path in the base graph");
        return report;
    }
    if (domain_vertex(g, d.bottom) != domain_vertex(g, d.top) ||
        codomain_vertex(g, d.bottom) != codomain_vertex(g, d.top))
        report.fail("ENDPOINT_MISMATCH", {},
                    "bottom and top must share domain and codomain vertices");

    const int n = static_cast<int>(d.bottom.size());
    const int m = static_cast<int>(d.top.size());

    // Perfect matching on the boundary points.
    std::set<Point> covered;
    bool matching_ok = true;
    for (const Arc& arc : d.arcs) {
        for (Point p : {arc.a, arc.b}) {
            int limit = (p.side == Side::Bottom) ? n : m;
            if (p.index < 0 || p.index >= limit || !covered.insert(p).second) {
                matching_ok = false;
            }
        }
        if (arc.a == arc.b) matching_ok = false;
    }
    if (covered.size() != static_cast<std::size_t>(n + m)) matching_ok = false;
    if (!matching_ok) {
        report.fail("MATCHING_INVALID", {},
                    "arcs are not a perfect matching on the boundary points");
        return report;
    }

    // Label rule: same-side arcs join dual labels, through arcs equal labels.
    for (const Arc& arc : d.arcs) {
        const std::string& la = label_at(d, arc.a);
        const std::string& lb = label_at(d, arc.b);
        if (arc.a.side == arc.b.side) {
            if (g.dual_of(la) != lb)
                report.fail("LABEL_RULE", {la, lb},
                            "same-side arc joins '" + la + "' and '" + lb +
                                "', which are not a dual pair");
        } else {
            if (la != lb)
                report.fail("LABEL_RULE", {la, lb},
                            "through strand joins unequal labels '" + la + "' and '" + lb + "'");
        }
    }

    // Crossing check by the reduction procedure: delete same-side arcs at
    // adjacent alive positions until none remain, then require the residue
    // to be an order-preserving bottom-to-top matching.
    std::vector<std::pair<int, int>> bottom_arcs, top_arcs;
    std::vector<std::pair<int, int>> through; // (bottom index, top index)
    for (const Arc& arc : d.arcs) {
        if (arc.a.side == Side::Bottom && arc.b.side == Side::Bottom)
            bottom_arcs.push_back({arc.a.index, arc.b.index});
        else if (arc.a.side == Side::Top && arc.b.side == Side::Top)
            top_arcs.push_back({arc.a.index, arc.b.index});
        else
            through.push_back({arc.a.index, arc.b.index});
    }

    std::vector<bool> alive_bottom, alive_top;
    bool shape_ok = reduce_same_side(n, bottom_arcs, alive_bottom, nullptr) &&
                    reduce_same_side(m, top_arcs, alive_top, nullptr);
    if (shape_ok) {
        std::sort(through.begin(), through.end());
        std::vector<int> tops_in_bottom_order;
        for (const auto& [bi, ti] : through) tops_in_bottom_order.push_back(ti);
        if (!std::is_sorted(tops_in_bottom_order.begin(), tops_in_bottom_order.end()))
            shape_ok = false;
    }
    if (!shape_ok)
        report.fail("CROSSING", {}, "arcs cannot be drawn without crossings");

    return report;
}

Morphism2 morphism(BiGraphPtr base, Diagram d, Complex coefficient) {
    d.canonicalize();
    Morphism2 f;
    f.base = std::move(base);
    f.bottom = d.bottom;
    f.top = d.top;
    if (coefficient != Complex(0.0, 0.0)) f.terms.emplace(std::move(d), coefficient);
    return f;
}

Morphism2 zero_morphism(BiGraphPtr base, GammaPath bottom, GammaPath top) {
    Morphism2 f;
    f.base = std::move(base);
    f.bottom = std::move(bottom);
    f.top = std::move(top);
    return f;
}

Morphism2 scale(const Morphism2& f, Complex c) {
    Morphism2 out = zero_morphism(f.base, f.bottom, f.top);
    if (c == Complex(0.0, 0.0)) return out;
    for (const auto& [d, coeff] : f.terms) out.terms.emplace(d, coeff * c);
    return out;
}

Morphism2 add(const Morphism2& f, const Morphism2& g) {
    if (f.bottom != g.bottom || f.top != g.top)
        throw std::invalid_argument("add: boundary mismatch");
    Morphism2 out = f;
    for (const auto& [d, coeff] : g.terms) {
        auto [it, fresh] = out.terms.emplace(d, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second == Complex(0.0, 0.0)) out.terms.erase(it);
        }
    }
    return out;
}

namespace {

void require_same_base(const Morphism2& f, const Morphism2& g, const char* what) {
    if (!f.base || !g.base || (f.base != g.base && !same_gamma(*f.base, *g.base)))
        throw std::invalid_argument(std::string(what) + ": morphisms over different base graphs");
}

// Glue dg on top of df; returns the composed loop-free diagram and the
// product of loop weights traced through the interface.
std::pair<Diagram, double> stack_diagrams(const BiGraph& g, const Diagram& df,
                                          const Diagram& dg) {
    const int n1 = static_cast<int>(df.bottom.size());
    const int m1 = static_cast<int>(df.top.size());
    const int m2 = static_cast<int>(dg.top.size());

    // Node numbering: df bottom 0..n1-1, interface n1..n1+m1-1, dg top after.
    auto node_of_f = [&](Point p) {
        return p.side == Side::Bottom ? p.index : n1 + p.index;
    };
    auto node_of_g = [&](Point p) {
        return p.side == Side::Bottom ? n1 + p.index : n1 + m1 + p.index;
    };
    const int total = n1 + m1 + m2;
    std::vector<int> via_f(static_cast<std::size_t>(total), -1);
    std::vector<int> via_g(static_cast<std::size_t>(total), -1);
    for (const Arc& arc : df.arcs) {
        int u = node_of_f(arc.a), v = node_of_f(arc.b);
        via_f[static_cast<std::size_t>(u)] = v;
        via_f[static_cast<std::size_t>(v)] = u;
    }
    for (const Arc& arc : dg.arcs) {
        int u = node_of_g(arc.a), v = node_of_g(arc.b);
        via_g[static_cast<std::size_t>(u)] = v;
        via_g[static_cast<std::size_t>(v)] = u;
    }

    auto is_interface = [&](int node) { return node >= n1 && node < n1 + m1; };
    auto boundary_point = [&](int node) {
        return node < n1 ? Point{Side::Bottom, node} : Point{Side::Top, node - n1 - m1};
    };

    Diagram out;
    out.bottom = df.bottom;
    out.top = dg.top;

    std::vector<bool> visited(static_cast<std::size_t>(total), false);
    // Open strands: walk from each boundary node, alternating layers at the
    // interface, until the opposite boundary is reached.
    for (int start = 0; start < total; ++start) {
        if (is_interface(start) || visited[static_cast<std::size_t>(start)]) continue;
        visited[static_cast<std::size_t>(start)] = true;
        bool in_f = start < n1;
        int node = start;
        while (true) {
            int next = in_f ? via_f[static_cast<std::size_t>(node)]
                            : via_g[static_cast<std::size_t>(node)];
            assert(next >= 0);
            visited[static_cast<std::size_t>(next)] = true;
            if (!is_interface(next)) {
                out.arcs.push_back(Arc{boundary_point(start), boundary_point(next)});
                break;
            }
            in_f = !in_f;
            node = next;
        }
    }

    // Remaining interface nodes lie on closed loops; each loop trades for
    // the weight of its label pair.
    double loop_factor = 1.0;
    for (int start = n1; start < n1 + m1; ++start) {
        if (visited[static_cast<std::size_t>(start)]) continue;
        const std::string& e = df.top.edges[static_cast<std::size_t>(start - n1)];
        double delta = g.weight_of(e);
        int node = start;
        bool in_f = true;
        while (!visited[static_cast<std::size_t>(node)]) {
            visited[static_cast<std::size_t>(node)] = true;
            const std::string& here = df.top.edges[static_cast<std::size_t>(node - n1)];
            assert(here == e || here == g.dual_of(e));
            (void)here;
            node = in_f ? via_f[static_cast<std::size_t>(node)]
                        : via_g[static_cast<std::size_t>(node)];
            in_f = !in_f;
        }
        loop_factor *= delta;
    }

    out.canonicalize();
    return {out, loop_factor};
}

} // namespace

Morphism2 compose_vertical(const Morphism2& f, const Morphism2& g) {
    require_same_base(f, g, "compose_vertical");
    const BiGraph& base = *f.base;
    if (f.top.edges != g.bottom.edges) {
        std::size_t pos = 0;
        while (pos < f.top.size() && pos < g.bottom.size() &&
               f.top.edges[pos] == g.bottom.edges[pos])
            ++pos;
        std::ostringstream msg;
        msg << "compose_vertical: boundary mismatch at position " << pos;
        throw std::invalid_argument(msg.str());
    }
    if (f.top.empty() && f.top.at != g.bottom.at)
        throw std::invalid_argument(
            "compose_vertical: boundary mismatch at position 0 (empty paths at different vertices)");

    Morphism2 out = zero_morphism(f.base, f.bottom, g.top);
    for (const auto& [df, cf] : f.terms) {
        for (const auto& [dg, cg] : g.terms) {
            auto [d, loop_factor] = stack_diagrams(base, df, dg);
            Complex coeff = cf * cg * loop_factor;
            auto [it, fresh] = out.terms.emplace(std::move(d), coeff);
            if (!fresh) {
                it->second += coeff;
                if (it->second == Complex(0.0, 0.0)) out.terms.erase(it);
            }
        }
    }
    return out;
}

Morphism2 compose_horizontal(const Morphism2& f, const Morphism2& g) {
    require_same_base(f, g, "compose_horizontal");
    const BiGraph& base = *f.base;
    if (codomain_vertex(base, f.bottom) != domain_vertex(base, g.bottom) ||
        codomain_vertex(base, f.top) != domain_vertex(base, g.top))
        throw std::invalid_argument("compose_horizontal: vertex mismatch between factors");

    auto concat = [&](const GammaPath& left, const GammaPath& right) {
        GammaPath p;
        p.edges = left.edges;
        p.edges.insert(p.edges.end(), right.edges.begin(), right.edges.end());
        p.at = left.empty() ? right.at : left.at;
        return p;
    };

    const int bottom_shift = static_cast<int>(f.bottom.size());
    const int top_shift = static_cast<int>(f.top.size());

    Morphism2 out = zero_morphism(f.base, concat(f.bottom, g.bottom), concat(f.top, g.top));
    for (const auto& [df, cf] : f.terms) {
        for (const auto& [dg, cg] : g.terms) {
            Diagram d;
            d.bottom = out.bottom;
            d.top = out.top;
            d.arcs = df.arcs;
            for (const Arc& arc : dg.arcs) {
                auto shift = [&](Point p) {
                    p.index += (p.side == Side::Bottom) ? bottom_shift : top_shift;
                    return p;
                };
                d.arcs.push_back(Arc{shift(arc.a), shift(arc.b)});
            }
            d.canonicalize();
            Complex coeff = cf * cg;
            auto [it, fresh] = out.terms.emplace(std::move(d), coeff);
            if (!fresh) {
                it->second += coeff;
                if (it->second == Complex(0.0, 0.0)) out.terms.erase(it);
            }
        }
    }
    return out;
}

Morphism2 adjoint(const Morphism2& f) {
    Morphism2 out = zero_morphism(f.base, f.top, f.bottom);
    for (const auto& [d, coeff] : f.terms) {
        Diagram r;
        r.bottom = d.top;
        r.top = d.bottom;
        for (const Arc& arc : d.arcs) {
            auto flip = [](Point p) {
                p.side = (p.side == Side::Bottom) ? Side::Top : Side::Bottom;
                return p;
            };
            r.arcs.push_back(Arc{flip(arc.a), flip(arc.b)});
        }
        r.canonicalize();
        out.terms.emplace(std::move(r), std::conj(coeff));
    }
    return out;
}

std::vector<ElementarySlice> decompose_to_slices(const BiGraph& g, const Diagram& d) {
    if (!validate_diagram(g, d).ok())
        throw std::invalid_argument("decompose_to_slices: invalid diagram");

    std::vector<std::pair<int, int>> bottom_arcs, top_arcs;
    for (const Arc& arc : d.arcs) {
        if (arc.a.side == Side::Bottom && arc.b.side == Side::Bottom)
            bottom_arcs.push_back({arc.a.index, arc.b.index});
        else if (arc.a.side == Side::Top && arc.b.side == Side::Top)
            top_arcs.push_back({arc.a.index, arc.b.index});
    }

    std::vector<ElementarySlice> slices;
    std::vector<bool> alive;

    auto remove_pair = [](const GammaPath& p, int rank) {
        GammaPath out = p;
        out.edges.erase(out.edges.begin() + rank, out.edges.begin() + rank + 2);
        return out;
    };

    // Caps: innermost bottom arcs first, leftmost tie break.
    std::vector<Removal> cap_order;
    bool reduced = reduce_same_side(static_cast<int>(d.bottom.size()), bottom_arcs, alive,
                                    &cap_order);
    assert(reduced);
    GammaPath current = d.bottom;
    for (const Removal& r : cap_order) {
        ElementarySlice s;
        s.kind = ElementarySlice::Kind::Cap;
        s.position = r.rank;
        s.edge = d.bottom.edges[static_cast<std::size_t>(r.left)];
        s.bottom = current;
        s.top = remove_pair(current, r.rank);
        current = s.top;
        slices.push_back(std::move(s));
    }

    // Cups: replay the top-side reduction in reverse, so outer arcs are
    // inserted before the arcs nested inside them.
    std::vector<Removal> cup_order;
    reduced = reduce_same_side(static_cast<int>(d.top.size()), top_arcs, alive, &cup_order);
    assert(reduced);
    (void)reduced;
    std::vector<GammaPath> stages{d.top};
    for (const Removal& r : cup_order)
        stages.push_back(remove_pair(stages.back(), r.rank));
    assert(stages.back().edges == current.edges);
    for (std::size_t k = cup_order.size(); k-- > 0;) {
        ElementarySlice s;
        s.kind = ElementarySlice::Kind::Cup;
        s.position = cup_order[k].rank;
        s.edge = d.top.edges[static_cast<std::size_t>(cup_order[k].left)];
        s.bottom = stages[k + 1];
        s.top = stages[k];
        slices.push_back(std::move(s));
    }

    if (slices.empty()) {
        ElementarySlice s;
        s.kind = ElementarySlice::Kind::Identity;
        s.bottom = d.bottom;
        s.top = d.top;
        slices.push_back(std::move(s));
    }
    return slices;
}

Diagram slice_diagram(const BiGraph& g, const ElementarySlice& s) {
    switch (s.kind) {
    case ElementarySlice::Kind::Identity:
        return identity_diagram(g, s.bottom);
    case ElementarySlice::Kind::Cup: {
        Diagram d;
        d.bottom = s.bottom;
        d.top = s.top;
        for (int i = 0; i < static_cast<int>(s.bottom.size()); ++i) {
            int j = (i < s.position) ? i : i + 2;
            d.arcs.push_back(Arc{{Side::Bottom, i}, {Side::Top, j}});
        }
        d.arcs.push_back(Arc{{Side::Top, s.position}, {Side::Top, s.position + 1}});
        d.canonicalize();
        return d;
    }
    case ElementarySlice::Kind::Cap: {
        Diagram d;
        d.bottom = s.bottom;
        d.top = s.top;
        for (int j = 0; j < static_cast<int>(s.top.size()); ++j) {
            int i = (j < s.position) ? j : j + 2;
            d.arcs.push_back(Arc{{Side::Bottom, i}, {Side::Top, j}});
        }
        d.arcs.push_back(Arc{{Side::Bottom, s.position}, {Side::Bottom, s.position + 1}});
        d.canonicalize();
        return d;
    }
    }
    throw std::logic_error("slice_diagram: unreachable");
}

} // namespace tlj
