#include "qpr/json_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;
using qpr::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_binary() {
    const char* path = std::getenv("QPRCERT_BIN");
    REQUIRE(path != nullptr);
    return path;
}

CliResult run_cli(const std::string& args) {
    const std::string command = cli_binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t n;
    while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "qprcert_cli_tests";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("certify --demo sic reports state negativity", "[cli]") {
    const auto result = run_cli("certify --demo sic");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report.at("kind") == "StateNegativity");
    CHECK(report.at("defect").get<double>() == Catch::Approx(0.5).margin(1e-9));
    CHECK_FALSE(report.contains("chain"));

    const auto chained = run_cli("certify --demo sic --chain");
    REQUIRE(chained.exit_code == 0);
    const json with_chain = json::parse(chained.output);
    CHECK(with_chain.at("chain").at("terminal") == "PremiseFailure");
    CHECK(with_chain.at("chain").at("c_integral").get<double>() ==
          Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("certify batch is deterministic and violation-free of escapes", "[cli]") {
    const std::string args = "certify --random-nonnegative --trials 50 --seed 7";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
    // Global flags are accepted on either side of the subcommand.
    const auto prefixed = run_cli("--seed 7 certify --random-nonnegative --trials 50");
    CHECK(prefixed.output == first.output);
    const json report = json::parse(first.output);
    CHECK(report.at("summary").at("no_violation").get<int>() == 0);
    CHECK(report.at("results").size() == 50);
    for (const auto& entry : report.at("results")) {
        CHECK(entry.at("kind") != "NoViolation");
        CHECK(entry.at("overlap_score").get<double>() <= 1.0 + 1e-9);
    }
}

TEST_CASE("certify on rep files round-trips through the counterexample fixtures", "[cli]") {
    const fs::path dir = scratch_dir() / "sic";
    const auto emitted = run_cli("--out " + dir.string() + " counterexample sic");
    REQUIRE(emitted.exit_code == 0);
    const auto result = run_cli("certify " + (dir / "sic_state.json").string() + " " +
                                (dir / "sic_effect.json").string());
    REQUIRE(result.exit_code == 0);
    CHECK(json::parse(result.output).at("kind") == "StateNegativity");
}

TEST_CASE("certify rejects malformed input with exit 2", "[cli]") {
    const fs::path bad = scratch_dir() / "truncated.json";
    std::ofstream(bad) << "{ \"space\": ";
    const auto result = run_cli("certify " + bad.string() + " " + bad.string());
    CHECK(result.exit_code == 2);
    CHECK(run_cli("certify").exit_code == 2);
    CHECK(run_cli("certify --demo unknown-demo").exit_code == 2);
}

TEST_CASE("extend evaluates the line example", "[cli]") {
    const auto result = run_cli("extend --demo line --query -1,2 --query 0.5,0.5 --query 5,5");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report.at("queries").at(0).at("in_hull").get<bool>());
    CHECK(report.at("queries").at(0).at("value").at(0).get<double>() ==
          Catch::Approx(3.0).margin(1e-9));
    CHECK(report.at("queries").at(1).at("value").at(0).get<double>() ==
          Catch::Approx(6.0).margin(1e-9));
    // (5,5) is off the affine hull of {(0,1),(1,0)}: reported, not evaluated.
    CHECK_FALSE(report.at("queries").at(2).at("in_hull").get<bool>());
    CHECK_FALSE(report.at("queries").at(2).contains("value"));
    CHECK(report.at("linear_extension").at("exists").get<bool>());
}

TEST_CASE("extend --require-linear exits 3 on the constant-one fixture", "[cli]") {
    const auto result = run_cli("extend --demo constant-one --require-linear");
    CHECK(result.exit_code == 3);
    const json report = json::parse(result.output);
    CHECK_FALSE(report.at("linear_extension").at("exists").get<bool>());
    CHECK(report.at("linear_extension").contains("witness"));
}

TEST_CASE("extend exits 3 on inconsistent data", "[cli]") {
    const fs::path file = scratch_dir() / "midpoint.json";
    json pvs{{"points", {{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}},
             {"values", {{0.0}, {1.0}, {3.0}}}};
    std::ofstream(file) << pvs.dump();
    const auto result = run_cli("extend " + file.string());
    CHECK(result.exit_code == 3);
}

TEST_CASE("reduce --frame 3 --subspace e1,e2 passes the QPR checks", "[cli]") {
    const fs::path dir = scratch_dir() / "reduce";
    const auto result =
        run_cli("--out " + dir.string() + " reduce --frame 3 --subspace e1,e2 --samples 100");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report.at("qpr3_pass").get<bool>());
    CHECK(report.at("trace_preservation_worst_defect").get<double>() <= 1e-12);
    CHECK(report.at("qubit_rep").at("qpr3").at("pass").get<bool>());
    CHECK(fs::exists(dir / "restricted_state.json"));
    CHECK(fs::exists(dir / "restricted_effect.json"));
}

TEST_CASE("reduce accepts a frame file and is deterministic", "[cli]") {
    const fs::path file = scratch_dir() / "sic_frame.json";
    json frame_json{{"dim", 2}, {"frame", json::array()}};
    for (const auto& e : qpr::SicFrame::regular_tetrahedron().povm().elements) {
        frame_json["frame"].push_back(qpr::to_json_complex(e.to_matrix()));
    }
    std::ofstream(file) << frame_json.dump();
    const std::string args = "reduce " + file.string() + " --subspace 0,1 --samples 50";
    const auto first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    const json report = json::parse(first.output);
    CHECK(report.at("qpr3_pass").get<bool>());
    CHECK(report.at("subspace_dim").get<int>() == 2);
    const auto second = run_cli(args);
    CHECK(first.output == second.output);
}

TEST_CASE("reduce rejects a non-orthonormal isometry with exit 2", "[cli]") {
    const fs::path file = scratch_dir() / "bad_isometry.json";
    json emb{{"V", {{{1.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {0.0, 0.0}}}},
             {"alpha", {{1.0, 0.0}, {0.0, 0.0}}}};
    std::ofstream(file) << emb.dump();
    const auto result = run_cli("reduce --frame 3 --isometry " + file.string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("counterexample batteries report expected passes and failures", "[cli]") {
    const fs::path dir = scratch_dir() / "counter";
    SECTION("duplication") {
        const auto result = run_cli("--out " + dir.string() + " counterexample duplication");
        REQUIRE(result.exit_code == 0);
        const json report = json::parse(result.output);
        for (const auto& check : report.at("checks")) {
            CHECK(check.at("as_expected").get<bool>());
            if (check.at("check") == "convex_linearity") {
                CHECK_FALSE(check.at("pass").get<bool>());
                CHECK(check.at("defect").get<double>() == 1.0);
            }
        }
        CHECK(report.at("certificate").at("kind") == "ConvexLinearityViolation");
    }
    SECTION("constant-one") {
        const auto result = run_cli("--out " + dir.string() + " counterexample constant-one");
        REQUIRE(result.exit_code == 0);
        const json report = json::parse(result.output);
        for (const auto& check : report.at("checks")) {
            CHECK(check.at("as_expected").get<bool>());
        }
    }
    SECTION("unknown name") {
        CHECK(run_cli("counterexample nosuch").exit_code == 2);
    }
}

TEST_CASE("negativity --demo sic reports the -1/2 witness", "[cli]") {
    const auto result = run_cli("negativity --demo sic");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report.at("state").at("min_value").get<double>() ==
          Catch::Approx(-0.5).margin(1e-9));
    CHECK(report.at("effect").at("min_value").get<double>() == 0.0);
}

TEST_CASE("negativity works on rep files and rejects tabulated input", "[cli]") {
    const fs::path dir = scratch_dir() / "neg";
    REQUIRE(run_cli("--out " + dir.string() + " counterexample sic").exit_code == 0);
    const auto result = run_cli("negativity " + (dir / "sic_state.json").string() + " --effect " +
                                (dir / "sic_effect.json").string());
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report.at("state").at("min_value").get<double>() ==
          Catch::Approx(-0.5).margin(1e-9));
    CHECK(report.at("effect").at("negativity").get<double>() == 0.0);

    REQUIRE(run_cli("--out " + dir.string() + " counterexample duplication").exit_code == 0);
    CHECK(run_cli("negativity " + (dir / "duplication_state.json").string()).exit_code == 2);
}

TEST_CASE("table format prints flattened keys", "[cli]") {
    const auto result = run_cli("--format table certify --demo sic");
    REQUIRE(result.exit_code == 0);
    CHECK(result.output.find("kind = \"StateNegativity\"") != std::string::npos);
}
