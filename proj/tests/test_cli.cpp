#include "tlj/cli.hpp"

#include "tlj/classification.hpp"
#include "tlj/families.hpp"
#include "tlj/json_io.hpp"

#include "corpus.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tlj;

namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = fs::path(TLJ_SOURCE_DIR) / "fixtures";

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "tlj_cli_tests";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("validate accepts the shipped base graph") {
    CliResult r = cli({"validate", "--gamma", (kFixtures / "gamma1.json").string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"ok\": true") != std::string::npos);
}

TEST_CASE("roundtrip on the worked example emits a witness") {
    CliResult r = cli({"roundtrip", "--fair-graph", (kFixtures / "lambda1.json").string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"witness\"") != std::string::npos);
    CHECK(r.out.find("\"vertex_map\"") != std::string::npos);

    // Byte-identical reruns.
    CliResult again = cli({"roundtrip", "--fair-graph", (kFixtures / "lambda1.json").string()});
    CHECK(again.out == r.out);
}

TEST_CASE("balance failure names the unmatched weight groups") {
    CliResult r = cli({"balance", "--fair-graph", (kFixtures / "unfair_two_loops.json").string()});
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("BALANCE_GROUP") != std::string::npos);
    CHECK(r.out.find("reciprocal partner") != std::string::npos);
}

TEST_CASE("generate, check, build, classify, iso pipeline") {
    fs::path dir = scratch_dir();
    fs::path apath = dir / "apath3.json";
    CliResult gen = cli({"gen", "--family", "apath", "--params", "n=3", "-o", apath.string()});
    REQUIRE(gen.exit_code == 0);

    CHECK(cli({"fair", "--fair-graph", apath.string()}).exit_code == 0);
    CHECK(cli({"balance", "--fair-graph", apath.string()}).exit_code == 0);
    CHECK(cli({"mw", "--fair-graph", apath.string()}).exit_code == 0);

    fs::path relabeled = dir / "apath3_relabeled.json";
    CliResult rel = cli({"gen", "--family", "relabel", "--fair-graph", apath.string(),
                         "--params", "seed=5", "-o", relabeled.string()});
    REQUIRE(rel.exit_code == 0);
    CHECK(cli({"iso", "--a", apath.string(), "--b", relabeled.string()}).exit_code == 0);

    fs::path solution = dir / "lambda1_solution.json";
    CliResult build = cli({"build-solution", "--fair-graph",
                           (kFixtures / "lambda1.json").string(), "-o", solution.string()});
    REQUIRE(build.exit_code == 0);

    fs::path classified = dir / "lambda1_back.json";
    CliResult classify = cli({"classify", "--solution", solution.string(), "-o",
                              classified.string()});
    REQUIRE(classify.exit_code == 0);
    CHECK(cli({"iso", "--a", classified.string(), "--b",
               (kFixtures / "lambda1.json").string()})
              .exit_code == 0);
}

TEST_CASE("mw rejects the reciprocal family with the quarter cycle") {
    fs::path dir = scratch_dir();
    fs::path f2 = dir / "reciprocal2.json";
    REQUIRE(cli({"gen", "--family", "two-vertex-reciprocal", "--params", "a=2", "-o",
                 f2.string()})
                .exit_code == 0);
    CliResult r = cli({"mw", "--fair-graph", f2.string()});
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("MW_CYCLE") != std::string::npos);
    CHECK(r.out.find("0.25") != std::string::npos);
}

TEST_CASE("eval of the closed loop is delta times the unit") {
    fs::path dir = scratch_dir();
    fs::path solution = dir / "sb_solution.json";
    REQUIRE(cli({"build-solution", "--fair-graph", (kFixtures / "lambda1.json").string(),
                 "-o", solution.string()})
                .exit_code == 0);

    BiGraphPtr g1 = corpus::gamma1();
    Morphism2 circle = compose_vertical(morphism(g1, make_cup(*g1, "sb")),
                                        morphism(g1, make_cap(*g1, "sb")));
    fs::path morphism_file = dir / "sb_circle.json";
    store_document(morphism_file, Document{"morphism2", 1, morphism_payload(circle)});

    CliResult r = cli({"eval", "--solution", solution.string(), "--morphism",
                       morphism_file.string()});
    REQUIRE(r.exit_code == 0);
    Document report = parse_document(r.out);
    const Json& blocks = report.payload.at("operator").at("blocks");
    REQUIRE(blocks.size() == 2);
    for (const auto& block : blocks) {
        double re = block.at("matrix")[0][0][0].get<double>();
        double im = block.at("matrix")[0][0][1].get<double>();
        CHECK(re == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(im == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("equiv compares solutions through their graphs") {
    fs::path dir = scratch_dir();
    fs::path base_solution = dir / "equiv_base.json";
    REQUIRE(cli({"build-solution", "--fair-graph", (kFixtures / "lambda1.json").string(),
                 "-o", base_solution.string()})
                .exit_code == 0);

    // Conjugated copy written through the library.
    LoadContext ctx{dir};
    Document doc = load_document(base_solution);
    FundamentalSolution s = solution_from_payload(doc.payload, "/payload", ctx);
    FundamentalSolution conj = conjugate_solution(s, random_unitaries(s, 77));
    fs::path conj_solution = dir / "equiv_conjugated.json";
    store_document(conj_solution, Document{"solution", 1, solution_payload(conj)});

    CHECK(cli({"equiv", "--a", base_solution.string(), "--b", conj_solution.string()})
              .exit_code == 0);

    // Two reciprocal solutions with swapped loop weights are inequivalent.
    FairGraph f2 = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 2.0);
    FairGraph f_half = family_two_vertex_reciprocal(corpus::gamma_oriented(2.5), 0.5);
    fs::path sol2 = dir / "equiv_f2.json";
    fs::path sol_half = dir / "equiv_fhalf.json";
    store_document(sol2, Document{"solution", 1,
                                  solution_payload(solution_from_graph(f2, 1e-10))});
    store_document(sol_half, Document{"solution", 1,
                                      solution_payload(solution_from_graph(f_half, 1e-10))});
    CliResult r = cli({"equiv", "--a", sol2.string(), "--b", sol_half.string()});
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("NOT_EQUIVALENT") != std::string::npos);
}

TEST_CASE("every report parses against the report schema") {
    fs::path dir = scratch_dir();
    fs::path f2 = dir / "schema_f2.json";
    REQUIRE(cli({"gen", "--family", "two-vertex-reciprocal", "--params", "a=2", "-o",
                 f2.string()})
                .exit_code == 0);
    std::vector<std::vector<std::string>> invocations = {
        {"validate", "--gamma", (kFixtures / "gamma1.json").string()},
        {"fair", "--fair-graph", (kFixtures / "lambda1.json").string()},
        {"fair", "--fair-graph", (kFixtures / "lambda1.json").string(), "--gamma",
         (kFixtures / "gamma1.json").string()},
        {"balance", "--fair-graph", (kFixtures / "lambda1.json").string()},
        {"balance", "--fair-graph", (kFixtures / "unfair_two_loops.json").string()},
        {"mw", "--fair-graph", f2.string()},
        {"iso", "--a", f2.string(), "--b", f2.string()},
        {"roundtrip", "--fair-graph", f2.string()},
    };
    for (const auto& args : invocations) {
        CAPTURE(args[0]);
        CliResult r = cli(args);
        CHECK(r.exit_code != 2);
        Document doc = parse_document(r.out); // throws if off-schema
        CHECK(doc.kind == "report");
        if (r.exit_code == 1) CHECK(!doc.payload.at("violations").empty());
    }
}

TEST_CASE("gen cover and the TLJ_SEED override") {
    fs::path dir = scratch_dir();
    fs::path f2 = dir / "cover_base.json";
    REQUIRE(cli({"gen", "--family", "two-vertex-reciprocal", "--params", "a=2", "-o",
                 f2.string()})
                .exit_code == 0);
    fs::path cover = dir / "cover3.json";
    REQUIRE(cli({"gen", "--family", "cover", "--fair-graph", f2.string(), "--params",
                 "sheets=3", "-o", cover.string()})
                .exit_code == 0);
    CHECK(cli({"fair", "--fair-graph", cover.string()}).exit_code == 0);
    CHECK(cli({"balance", "--fair-graph", cover.string()}).exit_code == 0);
    // A cover is not isomorphic to its base.
    CHECK(cli({"iso", "--a", f2.string(), "--b", cover.string()}).exit_code == 1);

    // TLJ_SEED overrides the relabel seed parameter.
    fs::path with_env = dir / "relabel_env.json";
    fs::path with_param = dir / "relabel_param.json";
    setenv("TLJ_SEED", "9", 1);
    REQUIRE(cli({"gen", "--family", "relabel", "--fair-graph", f2.string(), "--params",
                 "seed=1", "-o", with_env.string()})
                .exit_code == 0);
    unsetenv("TLJ_SEED");
    REQUIRE(cli({"gen", "--family", "relabel", "--fair-graph", f2.string(), "--params",
                 "seed=9", "-o", with_param.string()})
                .exit_code == 0);
    std::ifstream a(with_env), b(with_param);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("usage and input errors exit with 2") {
    fs::path dir = scratch_dir();
    fs::path bad = dir / "bad_version.json";
    {
        std::ofstream out(bad);
        out << R"({"kind": "gamma", "version": 99, "payload": {"vertices": [], "edges": []}})";
    }
    CliResult r = cli({"validate", "--gamma", bad.string()});
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("VERSION_UNSUPPORTED") != std::string::npos);

    CHECK(cli({"definitely-not-a-command"}).exit_code == 2);
    CHECK(cli({"validate"}).exit_code == 2);
    CHECK(cli({"fair", "--fair-graph", (dir / "missing.json").string()}).exit_code == 2);
}
