#include "tlj/cli.hpp"

#include "tlj/block_operator.hpp"
#include "tlj/classification.hpp"
#include "tlj/families.hpp"
#include "tlj/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace tlj {

namespace {

namespace fs = std::filesystem;

Document expect_kind(const fs::path& file, const std::string& kind) {
    Document doc = load_document(file);
    if (doc.kind != kind)
        throw SchemaError("KIND_MISMATCH", "/kind",
                          "'" + file.string() + "' is a " + doc.kind + " document, expected " +
                              kind);
    return doc;
}

BiGraphPtr load_gamma(const fs::path& file) {
    Document doc = expect_kind(file, "gamma");
    return std::make_shared<const BiGraph>(gamma_from_payload(doc.payload, "/payload"));
}

// --gamma, when present, overrides whatever the document carries inline or
// by reference.
FairGraph load_fair_graph(const fs::path& file, const std::optional<fs::path>& gamma_override) {
    Document doc = expect_kind(file, "fair_graph");
    if (gamma_override) doc.payload["gamma"] = gamma_payload(*load_gamma(*gamma_override));
    LoadContext ctx{file.parent_path()};
    return fair_graph_from_payload(doc.payload, "/payload", ctx);
}

FundamentalSolution load_solution(const fs::path& file,
                                  const std::optional<fs::path>& gamma_override) {
    Document doc = expect_kind(file, "solution");
    if (gamma_override) doc.payload["gamma"] = gamma_payload(*load_gamma(*gamma_override));
    LoadContext ctx{file.parent_path()};
    return solution_from_payload(doc.payload, "/payload", ctx);
}

Morphism2 load_morphism(const fs::path& file, const std::optional<fs::path>& gamma_override) {
    Document doc = expect_kind(file, "morphism2");
    if (gamma_override) doc.payload["gamma"] = gamma_payload(*load_gamma(*gamma_override));
    LoadContext ctx{file.parent_path()};
    return morphism_from_payload(doc.payload, "/payload", ctx);
}

int emit_report(std::ostream& out, std::ostream& err, Json payload, const std::string& summary,
                int exit_code) {
    Document doc;
    doc.kind = "report";
    doc.version = 1;
    doc.payload = std::move(payload);
    out << serialize_document(doc);
    err << summary << "\n";
    return exit_code;
}

int emit_check(std::ostream& out, std::ostream& err, const ValidationReport& report,
               const std::string& what, Json extras = Json::object()) {
    Json payload = report_payload(report);
    for (auto& [key, value] : extras.items()) payload[key] = value;
    if (report.ok()) return emit_report(out, err, payload, what + ": ok", 0);
    std::ostringstream summary;
    summary << what << ": failed with " << report.violations.size() << " violation(s)";
    return emit_report(out, err, std::move(payload), summary.str(), 1);
}

Json witness_json(const IsoWitness& w) {
    Json j;
    j["vertex_map"] = w.vertex_map;
    j["edge_map"] = w.edge_map;
    return j;
}

ValidationReport single_failure(std::string code, std::vector<std::string> ids,
                                std::string message) {
    ValidationReport r;
    r.fail(std::move(code), std::move(ids), std::move(message));
    return r;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, std::string> out;
    for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--params", "expected key=value, got '" + p + "'");
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"balanced fair graphs and unitary modules for graph-generated "
                 "Temperley-Lieb-Jones categories"};
    app.require_subcommand(1);

    std::string gamma_file, fair_file, solution_file, morphism_file, a_file, b_file;
    std::string out_file, family;
    std::vector<std::string> params;
    double tol = 1e-9;

    auto add_tol = [&](CLI::App* cmd) { cmd->add_option("--tol", tol, "numerical tolerance"); };

    auto* validate_cmd = app.add_subcommand("validate", "validate a gamma document");
    validate_cmd->add_option("--gamma", gamma_file)->required();

    auto* fair_cmd = app.add_subcommand("fair", "check the fairness equations");
    fair_cmd->add_option("--gamma", gamma_file);
    fair_cmd->add_option("--fair-graph", fair_file)->required();
    add_tol(fair_cmd);

    auto* balance_cmd = app.add_subcommand("balance", "search for a balanced involution");
    balance_cmd->add_option("--gamma", gamma_file);
    balance_cmd->add_option("--fair-graph", fair_file)->required();
    add_tol(balance_cmd);

    auto* build_cmd = app.add_subcommand("build-solution", "canonical solution of a fair graph");
    build_cmd->add_option("--gamma", gamma_file);
    build_cmd->add_option("--fair-graph", fair_file)->required();
    build_cmd->add_option("-o,--output", out_file)->required();
    add_tol(build_cmd);

    auto* classify_cmd = app.add_subcommand("classify", "graph generated by a solution");
    classify_cmd->add_option("--gamma", gamma_file);
    classify_cmd->add_option("--solution", solution_file)->required();
    classify_cmd->add_option("-o,--output", out_file)->required();
    add_tol(classify_cmd);

    auto* roundtrip_cmd =
        app.add_subcommand("roundtrip", "graph -> solution -> graph, then isomorphism");
    roundtrip_cmd->add_option("--gamma", gamma_file);
    roundtrip_cmd->add_option("--fair-graph", fair_file)->required();
    add_tol(roundtrip_cmd);

    auto* iso_cmd = app.add_subcommand("iso", "fair graph isomorphism");
    iso_cmd->add_option("--a", a_file)->required();
    iso_cmd->add_option("--b", b_file)->required();
    iso_cmd->add_option("--gamma", gamma_file);
    add_tol(iso_cmd);

    auto* mw_cmd = app.add_subcommand("mw", "Perron-Frobenius dimension data");
    mw_cmd->add_option("--gamma", gamma_file);
    mw_cmd->add_option("--fair-graph", fair_file)->required();
    add_tol(mw_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a diagram as a block operator");
    eval_cmd->add_option("--gamma", gamma_file);
    eval_cmd->add_option("--solution", solution_file)->required();
    eval_cmd->add_option("--morphism", morphism_file)->required();
    eval_cmd->add_option("-o,--output", out_file);
    add_tol(eval_cmd);

    auto* equiv_cmd = app.add_subcommand("equiv", "unitary equivalence of two solutions");
    equiv_cmd->add_option("--a", a_file)->required();
    equiv_cmd->add_option("--b", b_file)->required();
    equiv_cmd->add_option("--gamma", gamma_file);
    add_tol(equiv_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "generate a parametric fair graph");
    gen_cmd->add_option("--family", family, "apath | two-vertex-reciprocal | cover | relabel")
        ->required();
    gen_cmd->add_option("--gamma", gamma_file);
    gen_cmd->add_option("--fair-graph", fair_file);
    gen_cmd->add_option("--params", params, "key=value pairs");
    gen_cmd->add_option("-o,--output", out_file)->required();

    std::vector<std::string> argv = args;
    try {
        app.parse(std::vector<std::string>(argv.rbegin(), argv.rend()));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    std::optional<fs::path> gamma_override;
    if (!gamma_file.empty()) gamma_override = fs::path(gamma_file);

    try {
        if (app.got_subcommand(validate_cmd)) {
            Document doc = expect_kind(gamma_file, "gamma");
            BiGraph g = gamma_from_payload(doc.payload, "/payload");
            return emit_check(out, err, validate_bigraph(g), "validate");
        }

        if (app.got_subcommand(fair_cmd)) {
            FairGraph l = load_fair_graph(fair_file, gamma_override);
            ValidationReport structural = validate_fair_graph(l);
            if (!structural.ok()) return emit_check(out, err, structural, "fair");
            return emit_check(out, err, check_fair(l, tol), "fair");
        }

        if (app.got_subcommand(balance_cmd)) {
            FairGraph l = load_fair_graph(fair_file, gamma_override);
            ValidationReport structural = validate_fair_graph(l);
            if (!structural.ok()) return emit_check(out, err, structural, "balance");
            ValidationReport fairness = check_fair(l, tol);
            if (!fairness.ok()) return emit_check(out, err, fairness, "balance");
            BalanceResult result = balance_involution(l, tol);
            if (!result.involution) return emit_check(out, err, result.report, "balance");
            Json extras;
            extras["pairing"] = result.involution->pairing;
            return emit_check(out, err, result.report, "balance", std::move(extras));
        }

        if (app.got_subcommand(build_cmd)) {
            FairGraph l = load_fair_graph(fair_file, gamma_override);
            ValidationReport structural = validate_fair_graph(l);
            if (!structural.ok()) return emit_check(out, err, structural, "build-solution");
            ValidationReport fairness = check_fair(l, tol);
            if (!fairness.ok()) return emit_check(out, err, fairness, "build-solution");
            BalanceResult balance = balance_involution(l, tol);
            if (!balance.involution) return emit_check(out, err, balance.report, "build-solution");
            FundamentalSolution s = solution_from_graph_with_involution(l, *balance.involution, tol);
            store_document(out_file, Document{"solution", 1, solution_payload(s)});
            return emit_check(out, err, ValidationReport{}, "build-solution wrote " + out_file);
        }

        if (app.got_subcommand(classify_cmd)) {
            FundamentalSolution s = load_solution(solution_file, gamma_override);
            ValidationReport zigzag = check_zigzag(s, tol);
            if (!zigzag.ok()) return emit_check(out, err, zigzag, "classify");
            FairGraph l = graph_from_solution(s, tol);
            store_document(out_file, Document{"fair_graph", 1, fair_graph_payload(l)});
            return emit_check(out, err, ValidationReport{}, "classify wrote " + out_file);
        }

        if (app.got_subcommand(roundtrip_cmd)) {
            FairGraph l = load_fair_graph(fair_file, gamma_override);
            ValidationReport fairness = check_fair(l, tol);
            if (!fairness.ok()) return emit_check(out, err, fairness, "roundtrip");
            BalanceResult balance = balance_involution(l, tol);
            if (!balance.involution) return emit_check(out, err, balance.report, "roundtrip");
            FundamentalSolution s = solution_from_graph_with_involution(l, *balance.involution, tol);
            FairGraph back = graph_from_solution(s, tol);
            auto witness = fair_graph_isomorphic(back, l, tol);
            if (!witness)
                return emit_check(out, err,
                                  single_failure("ROUNDTRIP", {},
                                                 "generated graph is not isomorphic to the input"),
                                  "roundtrip");
            Json extras;
            extras["witness"] = witness_json(*witness);
            return emit_check(out, err, ValidationReport{}, "roundtrip", std::move(extras));
        }

        if (app.got_subcommand(iso_cmd)) {
            FairGraph l1 = load_fair_graph(a_file, gamma_override);
            FairGraph l2 = load_fair_graph(b_file, gamma_override);
            auto witness = fair_graph_isomorphic(l1, l2, tol);
            if (!witness)
                return emit_check(out, err,
                                  single_failure("NOT_ISOMORPHIC", {},
                                                 "no projection- and weight-preserving isomorphism"),
                                  "iso");
            Json extras;
            extras["witness"] = witness_json(*witness);
            return emit_check(out, err, ValidationReport{}, "iso", std::move(extras));
        }

        if (app.got_subcommand(mw_cmd)) {
            FairGraph l = load_fair_graph(fair_file, gamma_override);
            MwResult result = check_mw_type_report(l, tol);
            if (!result.dims) return emit_check(out, err, result.report, "mw");
            Json extras;
            extras["dimensions"] = result.dims->d;
            return emit_check(out, err, result.report, "mw", std::move(extras));
        }

        if (app.got_subcommand(eval_cmd)) {
            FundamentalSolution s = load_solution(solution_file, gamma_override);
            ValidationReport shape = validate_solution(s);
            if (!shape.ok()) return emit_check(out, err, shape, "eval");
            Morphism2 m = load_morphism(morphism_file, gamma_override);
            BlockOperator op = evaluate_functor(s, m);
            Json jop;
            jop["domain"] = Json{{"edges", op.domain.edges}, {"at", op.domain.at}};
            jop["codomain"] = Json{{"edges", op.codomain.edges}, {"at", op.codomain.at}};
            Json blocks = Json::array();
            for (const auto& [key, mat] : op.blocks) {
                Json jb;
                jb["domain_tuple"] = key.first;
                jb["codomain_tuple"] = key.second;
                Json rows = Json::array();
                for (Eigen::Index i = 0; i < mat.rows(); ++i) {
                    Json row = Json::array();
                    for (Eigen::Index j = 0; j < mat.cols(); ++j)
                        row.push_back(Json::array({mat(i, j).real(), mat(i, j).imag()}));
                    rows.push_back(std::move(row));
                }
                jb["matrix"] = std::move(rows);
                blocks.push_back(std::move(jb));
            }
            jop["blocks"] = std::move(blocks);
            Json extras;
            extras["operator"] = jop;
            if (!out_file.empty()) {
                Json payload = report_payload(ValidationReport{});
                payload["operator"] = jop;
                store_document(out_file, Document{"report", 1, std::move(payload)});
            }
            return emit_check(out, err, ValidationReport{}, "eval", std::move(extras));
        }

        if (app.got_subcommand(equiv_cmd)) {
            FundamentalSolution s = load_solution(a_file, gamma_override);
            FundamentalSolution t = load_solution(b_file, gamma_override);
            ValidationReport zs = check_zigzag(s, tol);
            if (!zs.ok()) return emit_check(out, err, zs, "equiv");
            ValidationReport zt = check_zigzag(t, tol);
            if (!zt.ok()) return emit_check(out, err, zt, "equiv");
            if (!solutions_equivalent(s, t, tol))
                return emit_check(out, err,
                                  single_failure("NOT_EQUIVALENT", {},
                                                 "generated graphs are not isomorphic"),
                                  "equiv");
            return emit_check(out, err, ValidationReport{}, "equiv");
        }

        if (app.got_subcommand(gen_cmd)) {
            auto kv = parse_params(params);
            auto need = [&](const std::string& key) {
                auto it = kv.find(key);
                if (it == kv.end())
                    throw CLI::ValidationError("--params", "missing parameter '" + key + "'");
                return it->second;
            };
            FairGraph l;
            if (family == "apath") {
                int n = std::stoi(need("n"));
                BiGraphPtr g = gamma_override
                                   ? load_gamma(*gamma_override)
                                   : std::make_shared<const BiGraph>(standard_gamma(
                                         StandardGamma::Unoriented,
                                         {2.0 * std::cos(std::numbers::pi / (n + 1))}));
                l = family_a_path(g, n);
            } else if (family == "two-vertex-reciprocal") {
                double a = std::stod(need("a"));
                BiGraphPtr g = gamma_override
                                   ? load_gamma(*gamma_override)
                                   : std::make_shared<const BiGraph>(standard_gamma(
                                         StandardGamma::Oriented, {a + 1.0 / a}));
                l = family_two_vertex_reciprocal(g, a);
            } else if (family == "cover") {
                if (fair_file.empty())
                    throw CLI::ValidationError("--fair-graph", "cover needs an input graph");
                l = family_cover(load_fair_graph(fair_file, gamma_override),
                                 std::stoi(need("sheets")));
            } else if (family == "relabel") {
                if (fair_file.empty())
                    throw CLI::ValidationError("--fair-graph", "relabel needs an input graph");
                std::uint64_t seed = std::stoull(need("seed"));
                if (const char* env = std::getenv("TLJ_SEED")) seed = std::stoull(env);
                l = family_relabel(load_fair_graph(fair_file, gamma_override), seed);
            } else {
                throw CLI::ValidationError("--family", "unknown family '" + family + "'");
            }
            store_document(out_file, Document{"fair_graph", 1, fair_graph_payload(l)});
            return emit_check(out, err, ValidationReport{}, "gen wrote " + out_file);
        }
    } catch (const SchemaError& e) {
        emit_report(out, err, report_payload(single_failure(e.code(), {e.path()}, e.what())),
                    std::string("input error: ") + e.what(), 2);
        return 2;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        emit_report(out, err, report_payload(single_failure("USAGE", {}, e.what())),
                    std::string("error: ") + e.what(), 2);
        return 2;
    }

    err << "no subcommand\n";
    return 2;
}

} // namespace tlj
