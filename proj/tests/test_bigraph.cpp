#include "tlj/bigraph.hpp"
#include "tlj/families.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tlj;

namespace {

bool has_code(const ValidationReport& r, const std::string& code) {
    for (const auto& v : r.violations)
        if (v.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("worked-example base graph validates and is connected") {
    BiGraph g = fixture_gamma1();
    ValidationReport r = validate_bigraph(g);
    CHECK(r.ok());
    CHECK(is_connected(g));
}

TEST_CASE("dual weight mismatch is flagged") {
    BiGraph g;
    g.vertices = {"v"};
    g.edges = {{"e", "v", "v", 2.0, "f"}, {"f", "v", "v", 3.0, "e"}};
    ValidationReport r = validate_bigraph(g);
    CHECK(!r.ok());
    CHECK(has_code(r, "DUAL_WEIGHT_MISMATCH"));
}

TEST_CASE("single self-dual loop validates") {
    BiGraph g = standard_gamma(StandardGamma::Unoriented, {1.5});
    CHECK(validate_bigraph(g).ok());
    CHECK(g.vertices.size() == 1);
    CHECK(g.edges.size() == 1);
    CHECK(g.edges[0].dual == g.edges[0].id);
}

TEST_CASE("remaining violation codes") {
    BiGraph g;
    g.vertices = {"v", "v"};
    g.edges = {{"e", "v", "x", -1.0, "missing"}};
    ValidationReport r = validate_bigraph(g);
    CHECK(has_code(r, "DUPLICATE_ID"));
    CHECK(has_code(r, "DANGLING_REFERENCE"));
    CHECK(has_code(r, "NONPOSITIVE_WEIGHT"));

    BiGraph h;
    h.vertices = {"a", "b"};
    h.edges = {{"e", "a", "b", 1.0, "f"},
               {"f", "a", "b", 1.0, "f"}}; // f neither reverses e nor squares to it
    ValidationReport rh = validate_bigraph(h);
    CHECK(has_code(rh, "DUAL_NOT_INVOLUTION"));
    CHECK(has_code(rh, "DUAL_ENDPOINT_MISMATCH"));
}

TEST_CASE("connectivity") {
    BiGraph isolated;
    isolated.vertices = {"a", "b"};
    CHECK(validate_bigraph(isolated).ok());
    CHECK(!is_connected(isolated));

    CHECK(is_connected(standard_gamma(StandardGamma::Shaded, {1.0})));

    BiGraph empty;
    CHECK(!is_connected(empty));
}

TEST_CASE("standard generators match the four presentations") {
    BiGraph unoriented = standard_gamma(StandardGamma::Unoriented, {2.0});
    CHECK(unoriented.vertices.size() == 1);
    CHECK(unoriented.edges.size() == 1);
    CHECK(unoriented.edges[0].weight == 2.0);
    CHECK(unoriented.edges[0].dual == unoriented.edges[0].id);

    BiGraph shaded = standard_gamma(StandardGamma::Shaded, {1.0});
    CHECK(shaded.vertices.size() == 2);
    CHECK(shaded.edges.size() == 2);
    CHECK(shaded.edges[0].dual == shaded.edges[1].id);
    CHECK(shaded.edges[0].source != shaded.edges[0].target);

    BiGraph two_color = standard_gamma(StandardGamma::TwoColor, {1.0, 3.0});
    CHECK(two_color.vertices.size() == 1);
    CHECK(two_color.edges.size() == 2);
    CHECK(two_color.edges[0].dual == two_color.edges[0].id);
    CHECK(two_color.edges[1].dual == two_color.edges[1].id);
    CHECK(two_color.edges[0].weight == 1.0);
    CHECK(two_color.edges[1].weight == 3.0);

    BiGraph oriented = standard_gamma(StandardGamma::Oriented, {1.7});
    CHECK(oriented.edges.size() == 2);
    CHECK(oriented.edges[0].dual == oriented.edges[1].id);

    for (const BiGraph* g : {&unoriented, &shaded, &two_color, &oriented}) {
        CHECK(validate_bigraph(*g).ok());
        CHECK(is_connected(*g));
    }

    CHECK_THROWS_AS(standard_gamma(StandardGamma::Unoriented, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(standard_gamma(StandardGamma::TwoColor, {1.0}), std::invalid_argument);
}

TEST_CASE("validation is pure and dual pairs mirror endpoints") {
    BiGraph g = fixture_gamma1();
    ValidationReport first = validate_bigraph(g);
    ValidationReport second = validate_bigraph(g);
    CHECK(first.ok() == second.ok());
    CHECK(first.violations.size() == second.violations.size());

    // Multiset of (source, target, weight) closed under endpoint swap.
    std::multiset<std::tuple<std::string, std::string, double>> triples, swapped;
    for (const auto& e : g.edges) {
        triples.insert({e.source, e.target, e.weight});
        swapped.insert({e.target, e.source, e.weight});
    }
    CHECK(triples == swapped);
}
