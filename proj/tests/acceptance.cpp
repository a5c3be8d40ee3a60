// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include "tlj/block_operator.hpp"
#include "tlj/classification.hpp"
#include "tlj/families.hpp"
#include "tlj/json_io.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

using namespace tlj;
using Clock = std::chrono::steady_clock;

namespace {

struct Context {
    std::vector<corpus::NamedGraph> graphs;
    // Canonical solutions of every corpus graph, built once.
    std::vector<FundamentalSolution> solutions;
};

double zigzag_worst_residual(const FundamentalSolution& s) {
    const BiGraph& g = *s.base;
    auto phi = phi_from_cups(s);
    double worst = 0.0;
    for (const auto& [key, block] : phi) {
        const GammaEdge& e = g.edge(key.edge);
        const Matrix& a = block.matrix;
        const Matrix& b = phi.at(BlockKey{e.dual, key.w, key.v}).matrix;
        Matrix snake = b * a.conjugate() - Matrix::Identity(a.cols(), a.cols());
        worst = std::max(worst, operator_norm(snake));
    }
    for (const auto& e : g.edges)
        for (const auto& v : s.gradings.sets.at(e.source)) {
            double sum = 0.0;
            for (const auto& w : s.gradings.sets.at(e.target)) {
                auto it = phi.find(BlockKey{e.id, v, w});
                if (it != phi.end()) sum += it->second.matrix.squaredNorm();
            }
            worst = std::max(worst, std::abs(sum - e.weight));
        }
    return worst;
}

// Criterion 1: the shipped worked-example fixture is fair and balanced at
// tolerance 1e-12, in under a second.
bool criterion_worked_example(const Context&, std::ostream& log) {
    auto t0 = Clock::now();
    std::filesystem::path fixtures = std::filesystem::path(TLJ_SOURCE_DIR) / "fixtures";
    Document doc = load_document(fixtures / "lambda1.json");
    LoadContext ctx{fixtures};
    FairGraph lambda1 = fair_graph_from_payload(doc.payload, "/payload", ctx);

    bool ok = check_fair(lambda1, 1e-12).ok();
    auto involution = find_balanced_involution(lambda1, 1e-12);
    ok = ok && involution.has_value();
    ok = ok && validate_involution(lambda1, *involution, 1e-12).ok();

    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    log << "fair+balanced at 1e-12 in " << seconds << "s";
    return ok && seconds < 1.0;
}

// Criterion 2: graph -> solution -> graph is the identity up to fair-graph
// isomorphism with weights within 1e-9, over the whole corpus, in < 30 s.
bool criterion_roundtrip(Context& ctx, std::ostream& log) {
    auto t0 = Clock::now();
    bool ok = true;
    ctx.solutions.clear();
    for (const auto& [name, graph] : ctx.graphs) {
        FundamentalSolution s = solution_from_graph(graph, 1e-10);
        FairGraph back = graph_from_solution(s, 1e-10);
        if (!fair_graph_isomorphic(back, graph, 1e-9).has_value()) {
            log << name << " failed the roundtrip; ";
            ok = false;
        }
        ctx.solutions.push_back(std::move(s));
    }
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    log << ctx.graphs.size() << " graphs in " << seconds << "s";
    return ok && seconds < 30.0;
}

// Criterion 3: constructed solutions meet 1e-12, conjugated ones 1e-10.
bool criterion_zigzag(const Context& ctx, std::ostream& log) {
    bool ok = true;
    double worst_plain = 0.0, worst_conjugated = 0.0;
    for (std::size_t i = 0; i < ctx.solutions.size(); ++i) {
        const FundamentalSolution& s = ctx.solutions[i];
        double residual = zigzag_worst_residual(s);
        worst_plain = std::max(worst_plain, residual);
        if (!(residual <= 1e-12) || !check_zigzag(s, 1e-12).ok()) ok = false;

        FundamentalSolution conjugated =
            conjugate_solution(s, random_unitaries(s, 900 + static_cast<std::uint64_t>(i)));
        double conj_residual = zigzag_worst_residual(conjugated);
        worst_conjugated = std::max(worst_conjugated, conj_residual);
        if (!(conj_residual <= 1e-10) || !check_zigzag(conjugated, 1e-10).ok()) ok = false;
    }
    log << "worst constructed " << worst_plain << ", worst conjugated " << worst_conjugated;
    return ok;
}

// Criterion 4: sigma(Phi^e* Phi^e) is the reciprocal multiset of the dual
// block's spectrum, within relative 1e-9.
bool criterion_spectral_reciprocity(const Context& ctx, std::ostream& log) {
    bool ok = true;
    double worst = 0.0;
    for (const FundamentalSolution& s : ctx.solutions) {
        const BiGraph& g = *s.base;
        auto phi = phi_from_cups(s);
        for (const auto& [key, block] : phi) {
            const GammaEdge& e = g.edge(key.edge);
            auto forward = squared_singular_values_ascending(block.matrix);
            auto backward = squared_singular_values_ascending(
                phi.at(BlockKey{e.dual, key.w, key.v}).matrix);
            if (forward.size() != backward.size()) {
                ok = false;
                continue;
            }
            for (std::size_t i = 0; i < forward.size(); ++i) {
                double product = forward[i] * backward[backward.size() - 1 - i];
                worst = std::max(worst, std::abs(product - 1.0));
                if (std::abs(product - 1.0) > 1e-9) ok = false;
            }
        }
    }
    log << "worst reciprocity defect " << worst;
    return ok;
}

// Criterion 5: 200 seeded composable diagram pairs per corpus solution;
// evaluation is multiplicative within 1e-12, a closed loop multiplies by
// delta, and the zigzag composite evaluates to the identity.
bool criterion_functor_coherence(const Context& ctx, std::ostream& log) {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < ctx.solutions.size(); ++i) {
        const FundamentalSolution& s = ctx.solutions[i];
        BiGraphPtr base = s.base;
        const BiGraph& g = *base;
        std::mt19937_64 rng(4000 + static_cast<std::uint64_t>(i));

        for (int pair = 0; pair < 200; ++pair) {
            GammaPath start = corpus::random_path(base, 2, rng);
            Morphism2 f = corpus::random_slice_morphism(base, start, 2, rng);
            Morphism2 h = corpus::random_slice_morphism(base, f.top, 2, rng);
            BlockOperator composite = evaluate_functor(s, compose_vertical(f, h));
            BlockOperator factored =
                multiply(evaluate_functor(s, h), evaluate_functor(s, f));
            double defect = block_distance(composite, factored);
            worst = std::max(worst, defect);
            if (!(defect <= 1e-12)) ok = false;
        }

        // Loop relation: append a cup/cap detour at the end of a strand.
        const GammaEdge& e0 = g.edges.front();
        GammaPath p = empty_path(e0.source);
        Morphism2 f = morphism(base, identity_diagram(g, p));
        ElementarySlice cup;
        cup.kind = ElementarySlice::Kind::Cup;
        cup.position = 0;
        cup.edge = e0.id;
        cup.bottom = p;
        cup.top = p;
        cup.top.edges = {e0.id, e0.dual};
        ElementarySlice cap;
        cap.kind = ElementarySlice::Kind::Cap;
        cap.position = 0;
        cap.edge = e0.id;
        cap.bottom = cup.top;
        cap.top = p;
        Morphism2 looped = compose_vertical(
            compose_vertical(f, morphism(base, slice_diagram(g, cup))),
            morphism(base, slice_diagram(g, cap)));
        BlockOperator looped_op = evaluate_functor(s, looped);
        BlockOperator scaled =
            scale_operator(evaluate_functor(s, f), Complex(e0.weight, 0.0));
        double loop_defect = block_distance(looped_op, scaled);
        worst = std::max(worst, loop_defect);
        if (!(loop_defect <= 1e-12)) ok = false;

        // Zigzag composite on [e] is the identity.
        GammaPath strand = path_of(g, {e0.id});
        Morphism2 id_e = morphism(base, identity_diagram(g, strand));
        Morphism2 lower = compose_horizontal(id_e, morphism(base, make_cup(g, e0.dual)));
        Morphism2 upper = compose_horizontal(morphism(base, make_cap(g, e0.id)), id_e);
        BlockOperator z = evaluate_functor(s, compose_vertical(lower, upper));
        double z_defect = block_distance(z, evaluate_functor(s, id_e));
        worst = std::max(worst, z_defect);
        if (!(z_defect <= 1e-12)) ok = false;
    }
    log << "worst coherence defect " << worst;
    return ok;
}

// Criterion 6: conjugation is recognized as equivalence for 50 seeded
// unitary families; repaired weight perturbations are rejected by the
// balance check or the equivalence decision; no false positives.
bool criterion_equivalence(const Context& ctx, std::ostream& log) {
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        const FundamentalSolution& s =
            ctx.solutions[static_cast<std::size_t>(i) % ctx.solutions.size()];
        FundamentalSolution conjugated =
            conjugate_solution(s, random_unitaries(s, 7000 + static_cast<std::uint64_t>(i)));
        if (!solutions_equivalent(s, conjugated, 1e-9)) {
            ok = false;
            log << "conjugate " << i << " not recognized; ";
        }
    }

    // Perturb one weight by +0.1, repair fairness on the complementary edge;
    // the result must fail the balance check or be decided inequivalent.
    auto perturbed_rejected = [&](const FairGraph& original, const std::string& bump_id,
                                  const std::string& repair_id) {
        FairGraph l = original;
        for (auto& e : l.edges) {
            if (e.id == bump_id) e.weight += 0.1;
            if (e.id == repair_id) e.weight -= 0.1;
        }
        if (!check_fair(l, 1e-9).ok()) return true;
        if (!balance_involution(l, 1e-9).involution.has_value()) return true;
        FundamentalSolution t = solution_from_graph(l, 1e-9);
        FundamentalSolution s = solution_from_graph(original, 1e-10);
        return !solutions_equivalent(s, t, 1e-9);
    };
    FairGraph f2 = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 2.0);
    FairGraph f2_bumped = f2;
    for (auto& e : f2_bumped.edges) {
        if (e.id == "l0") e.weight += 0.1; // 2 -> 2.1
        if (e.id == "c0") e.weight -= 0.1; // 0.5 -> 0.4, fairness preserved
    }
    bool fair_still = check_fair(f2_bumped, 1e-9).ok();
    bool balance_broken = !balance_involution(f2_bumped, 1e-9).involution.has_value();
    if (!(fair_still && balance_broken)) {
        ok = false;
        log << "reciprocal perturbation not rejected; ";
    }
    if (!perturbed_rejected(ctx.graphs[0].graph, "wg0.0.0", "wg0.0.1")) {
        ok = false;
        log << "lambda1 perturbation not rejected; ";
    }

    // No false positives on genuinely different graphs over the same base.
    FundamentalSolution s2 = solution_from_graph(f2, 1e-10);
    FundamentalSolution s_half = solution_from_graph(
        family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 0.5), 1e-10);
    if (solutions_equivalent(s2, s_half, 1e-9)) {
        ok = false;
        log << "reciprocal swap accepted; ";
    }
    FundamentalSolution cover_solution = solution_from_graph(
        family_cover(family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 2.0), 3),
        1e-10);
    if (solutions_equivalent(s2, cover_solution, 1e-9)) {
        ok = false;
        log << "cover confused with its base; ";
    }
    log << "50 conjugates recognized, perturbations and mismatches rejected";
    return ok;
}

// Criterion 7: dimension data exists for the worked example and every
// quantum-dimension path; the reciprocal family fails with the quarter
// cycle; sums re-verify at 1e-9.
bool criterion_mw(const Context& ctx, std::ostream& log) {
    bool ok = true;

    auto verify_sums = [&](const FairGraph& l, const DimensionFunction& dims) {
        const BiGraph& g = *l.base;
        for (const auto& e : g.edges) {
            for (const auto& v : l.vertices) {
                if (v.pi == e.source) {
                    double sum = 0.0;
                    for (const auto& eps : l.edges)
                        if (eps.source == v.id && eps.pi == e.id)
                            sum += dims.d.at(eps.target) / dims.d.at(eps.source);
                    if (std::abs(sum - e.weight) > 1e-9) return false;
                }
                if (v.pi == e.target) {
                    double sum = 0.0;
                    for (const auto& eps : l.edges)
                        if (eps.target == v.id && eps.pi == e.id)
                            sum += dims.d.at(eps.source) / dims.d.at(eps.target);
                    if (std::abs(sum - e.weight) > 1e-9) return false;
                }
            }
        }
        return true;
    };

    for (const auto& [name, graph] : ctx.graphs) {
        bool expect_some = name == "lambda1" || name.rfind("apath", 0) == 0;
        if (!expect_some) continue;
        auto dims = check_mw_type(graph, 1e-9);
        if (!dims.has_value() || !verify_sums(graph, *dims)) {
            ok = false;
            log << name << " missing dimension data; ";
        }
    }

    FairGraph f2 = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 2.0);
    MwResult r = check_mw_type_report(f2, 1e-9);
    if (r.dims.has_value() || !r.witness_product.has_value() ||
        std::abs(*r.witness_product - 0.25) > 1e-12) {
        ok = false;
        log << "reciprocal witness cycle missing or off; ";
    } else {
        log << "witness cycle product " << *r.witness_product;
    }
    return ok;
}

// Criterion 8: graphs admitting a second balanced involution induce
// isomorphic classifying graphs under either choice.
bool criterion_involution_independence(const Context& ctx, std::ostream& log) {
    bool ok = true;
    int exercised = 0;
    for (const auto& [name, graph] : ctx.graphs) {
        auto inv = find_balanced_involution(graph, 1e-10);
        if (!inv) {
            ok = false;
            continue;
        }
        // Within-group permutation: find two edges with identical
        // (source, target, pi, weight) whose partners differ, and swap.
        BalancedInvolution other = *inv;
        bool found = false;
        for (const auto& a : graph.edges) {
            if (found) break;
            for (const auto& b : graph.edges) {
                if (a.id >= b.id) continue;
                if (a.source != b.source || a.target != b.target || a.pi != b.pi) continue;
                if (std::abs(a.weight - b.weight) > 1e-12) continue;
                const std::string pa = inv->pairing.at(a.id);
                const std::string pb = inv->pairing.at(b.id);
                if (pa == pb) continue;
                if (pa == b.id) {
                    // A self-partner pair: fixing both is the alternative.
                    other.pairing[a.id] = a.id;
                    other.pairing[b.id] = b.id;
                } else {
                    other.pairing[a.id] = pb;
                    other.pairing[pb] = a.id;
                    other.pairing[b.id] = pa;
                    other.pairing[pa] = b.id;
                }
                found = true;
                break;
            }
        }
        if (!found) continue; // no second involution forced by permutations
        if (!validate_involution(graph, other, 1e-9).ok()) {
            ok = false;
            log << name << " produced an invalid alternative involution; ";
            continue;
        }
        ++exercised;
        FundamentalSolution s1 = solution_from_graph_with_involution(graph, *inv, 1e-10);
        FundamentalSolution s2 = solution_from_graph_with_involution(graph, other, 1e-10);
        if (!fair_graph_isomorphic(graph_from_solution(s1, 1e-9),
                                   graph_from_solution(s2, 1e-9), 1e-9)
                 .has_value()) {
            ok = false;
            log << name << " involutions induce non-isomorphic graphs; ";
        }
    }
    log << exercised << " graphs with a second involution";
    return ok && exercised > 0;
}

// Criterion 9: the production iso and balance deciders agree with the
// brute-force oracles on every small corpus graph.
bool criterion_oracles(const Context& ctx, std::ostream& log) {
    bool ok = true;
    int iso_checked = 0, balance_checked = 0;

    auto max_fiber = [](const FairGraph& l) {
        std::map<std::string, int> sizes;
        for (const auto& e : l.edges) ++sizes[e.pi];
        int worst = 0;
        for (const auto& [pi, n] : sizes) worst = std::max(worst, n);
        return worst;
    };

    for (std::size_t i = 0; i < ctx.graphs.size(); ++i) {
        const FairGraph& l = ctx.graphs[i].graph;
        if (l.vertices.size() <= 7) {
            FairGraph relabeled = family_relabel(l, 600 + static_cast<std::uint64_t>(i));
            bool fast = fair_graph_isomorphic(l, relabeled, 1e-9).has_value();
            bool brute = oracle::brute_force_isomorphic(l, relabeled, 1e-9);
            if (fast != brute || !fast) ok = false;
            ++iso_checked;
        }
        if (max_fiber(l) <= 8) {
            bool fast = balance_involution(l, 1e-9).involution.has_value();
            bool brute = oracle::exhaustive_involution_exists(l, 1e-9);
            if (fast != brute) ok = false;
            ++balance_checked;
        }
    }

    // Negative pairs over a shared base graph.
    FairGraph f2 = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 2.0);
    FairGraph f_half = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 0.5);
    bool fast = fair_graph_isomorphic(f2, f_half, 1e-9).has_value();
    bool brute = oracle::brute_force_isomorphic(f2, f_half, 1e-9);
    if (fast != brute || fast) ok = false;

    FairGraph unbalanced;
    unbalanced.base = corpus::gamma0(2.0);
    unbalanced.vertices = {{"v0", "v"}};
    unbalanced.edges = {{"l0", "v0", "v0", 0.5, "e"}, {"l1", "v0", "v0", 1.5, "e"}};
    if (balance_involution(unbalanced, 1e-9).involution.has_value() !=
        oracle::exhaustive_involution_exists(unbalanced, 1e-9))
        ok = false;
    if (balance_involution(unbalanced, 1e-9).involution.has_value()) ok = false;

    log << iso_checked << " iso and " << balance_checked << " balance agreements";
    return ok && iso_checked > 0 && balance_checked > 0;
}

} // namespace

int main() {
    Context ctx;
    ctx.graphs = corpus::acceptance_corpus();

    struct Criterion {
        std::string name;
        std::function<bool(std::ostream&)> run;
    };
    std::vector<Criterion> criteria = {
        {"worked example fair+balanced (tol 1e-12, < 1 s)",
         [&](std::ostream& log) { return criterion_worked_example(ctx, log); }},
        {"main-theorem roundtrip over the corpus (weights 1e-9, < 30 s)",
         [&](std::ostream& log) { return criterion_roundtrip(ctx, log); }},
        {"zigzag residuals (constructed 1e-12, conjugated 1e-10)",
         [&](std::ostream& log) { return criterion_zigzag(ctx, log); }},
        {"spectral reciprocity (relative 1e-9)",
         [&](std::ostream& log) { return criterion_spectral_reciprocity(ctx, log); }},
        {"skein/functor coherence (200 pairs per solution, 1e-12)",
         [&](std::ostream& log) { return criterion_functor_coherence(ctx, log); }},
        {"equivalence decision (50 unitary families, no false positives)",
         [&](std::ostream& log) { return criterion_equivalence(ctx, log); }},
        {"MW discrimination (witness cycle 0.25 +- 1e-12, sums 1e-9)",
         [&](std::ostream& log) { return criterion_mw(ctx, log); }},
        {"involution independence of induced graphs",
         [&](std::ostream& log) { return criterion_involution_independence(ctx, log); }},
        {"oracle agreement (iso <= 7 vertices, pairing <= 8 per fiber)",
         [&](std::ostream& log) { return criterion_oracles(ctx, log); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream log;
        auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = criteria[i].run(log);
        } catch (const std::exception& e) {
            log << "exception: " << e.what();
        }
        double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << (i + 1) << ": "
                  << criteria[i].name << " :: " << log.str() << " (" << ms << " ms)\n";
        if (!pass) ++failures;
    }
    return failures;
}
