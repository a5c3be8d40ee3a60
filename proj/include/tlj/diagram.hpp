#pragma once

#include "tlj/bigraph.hpp"
#include "tlj/validation.hpp"

#include <compare>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace tlj {

using Complex = std::complex<double>;

/// A path in Gamma, the 1-morphisms of the diagram category. For the empty
/// path `at` names the vertex; otherwise `at` equals source(edges[0]).
struct GammaPath {
    std::vector<std::string> edges;
    std::string at;

    std::size_t size() const { return edges.size(); }
    bool empty() const { return edges.empty(); }

    auto operator<=>(const GammaPath&) const = default;
};

GammaPath empty_path(std::string at_vertex);
GammaPath path_of(const BiGraph& g, std::vector<std::string> edge_ids);

bool valid_path(const BiGraph& g, const GammaPath& p);
std::string domain_vertex(const BiGraph& g, const GammaPath& p);
std::string codomain_vertex(const BiGraph& g, const GammaPath& p);

enum class Side { Bottom = 0, Top = 1 };

struct Point {
    Side side = Side::Bottom;
    int index = 0;
    auto operator<=>(const Point&) const = default;
};

/// Unordered pair of boundary points, normalized so a <= b.
struct Arc {
    Point a, b;
    Arc() = default;
    Arc(Point x, Point y) : a(x < y ? x : y), b(x < y ? y : x) {}
    auto operator<=>(const Arc&) const = default;
};

/// A single loop-free TLJ(Gamma) diagram: a non-crossing perfect matching on
/// the boundary points of the unit square, bottom and top both read left to
/// right. Same-side arcs join dual labels, through arcs join equal labels.
struct Diagram {
    GammaPath bottom;
    GammaPath top;
    std::vector<Arc> arcs; // kept sorted by first endpoint

    void canonicalize();
    auto operator<=>(const Diagram&) const = default;
};

/// A finite complex-linear combination of diagrams sharing bottom and top.
/// Closed loops are never stored; the skein scalar is folded into the
/// coefficients at composition time. No zero coefficients are kept; the
/// empty term map is the zero 2-morphism.
struct Morphism2 {
    BiGraphPtr base;
    GammaPath bottom;
    GammaPath top;
    std::map<Diagram, Complex> terms;
};

/// Exactly one cup or cap inserted into identity strands, or a pure identity
/// layer; the grid cells of the canonical strict functor evaluation.
struct ElementarySlice {
    enum class Kind { Identity, Cup, Cap };
    Kind kind = Kind::Identity;
    int position = 0;  // unused for Identity
    std::string edge;  // unused for Identity
    GammaPath bottom;
    GammaPath top;
};

Diagram make_cup(const BiGraph& g, const std::string& edge_id);
Diagram make_cap(const BiGraph& g, const std::string& edge_id);
Diagram identity_diagram(const BiGraph& g, const GammaPath& p);

ValidationReport validate_diagram(const BiGraph& g, const Diagram& d);

Morphism2 morphism(BiGraphPtr base, Diagram d, Complex coefficient = Complex(1.0, 0.0));
Morphism2 zero_morphism(BiGraphPtr base, GammaPath bottom, GammaPath top);
Morphism2 scale(const Morphism2& f, Complex c);
Morphism2 add(const Morphism2& f, const Morphism2& g);

/// Vertical stacking, f first then g (requires top(f) == bottom(g)); each
/// closed loop traced through the interface contributes its weight as a
/// scalar factor.
Morphism2 compose_vertical(const Morphism2& f, const Morphism2& g);

/// Side-by-side juxtaposition; requires the codomain vertex of f's paths to
/// equal the domain vertex of g's.
Morphism2 compose_horizontal(const Morphism2& f, const Morphism2& g);

/// Reflection around the horizontal axis with conjugated coefficients.
Morphism2 adjoint(const Morphism2& f);

/// Grid decomposition: caps first (innermost bottom arcs, leftmost tie
/// break), then cups (outermost top arcs first, so innermost are inserted
/// last). Folding the slices with compose_vertical reproduces the diagram
/// with coefficient exactly one.
std::vector<ElementarySlice> decompose_to_slices(const BiGraph& g, const Diagram& d);

Diagram slice_diagram(const BiGraph& g, const ElementarySlice& s);

} // namespace tlj
