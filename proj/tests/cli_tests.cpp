#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "mermin/analysis.hpp"
#include "mermin/counts.hpp"
#include "mermin/experiments.hpp"
#include "mermin/hv/relations.hpp"
#include "mermin/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Runs the installed binary through the shell, folding stderr into the
// captured text, and returns the exit code.
int run_cli(const std::string& args, std::string* output = nullptr,
            const std::string& env_prefix = "") {
    const std::string command =
        env_prefix + std::string(MERMIN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buffer[4096];
    while (std::size_t n = std::fread(buffer, 1, sizeof(buffer), pipe)) {
        text.append(buffer, n);
    }
    const int status = pclose(pipe);
    if (output != nullptr) *output = text;
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("identical flags reproduce identical output files") {
    const fs::path dir = fresh_dir("rerun");
    const std::string flags =
        "run --experiment all --shots 2000 --seed 42 --out-dir " + dir.string();
    REQUIRE(run_cli(flags) == 0);
    std::array<std::string, 6> first;
    std::size_t slot = 0;
    for (int id = 1; id <= 3; ++id) {
        first[slot++] = slurp(dir / ("counts_experiment" + std::to_string(id) + ".json"));
        first[slot++] = slurp(dir / ("counts_experiment" + std::to_string(id) + ".csv"));
    }
    REQUIRE(run_cli(flags) == 0);
    slot = 0;
    for (int id = 1; id <= 3; ++id) {
        CHECK(first[slot++] ==
              slurp(dir / ("counts_experiment" + std::to_string(id) + ".json")));
        CHECK(first[slot++] ==
              slurp(dir / ("counts_experiment" + std::to_string(id) + ".csv")));
    }
}

TEST_CASE("noiseless runs emit the eight admissible outcomes only") {
    const fs::path dir = fresh_dir("clean");
    REQUIRE(run_cli("run --experiment 1 --shots 3000 --seed 5 --out-dir " +
                    dir.string()) == 0);
    const mermin::CountsTable table =
        mermin::load_counts((dir / "counts_experiment1.json").string());
    CHECK(table.total_shots == 3000);
    CHECK(table.counts.size() == 8);
    for (const auto& [key, count] : table.counts) {
        const mermin::ShotRecord shot = mermin::shot_from_key(key);
        CHECK(shot.bits[0] == 1);
    }
    // The CSV mirror carries the same rows.
    const mermin::CountsTable csv_table =
        mermin::load_counts((dir / "counts_experiment1.csv").string());
    CHECK(csv_table.counts == table.counts);
}

TEST_CASE("output files embed a provenance block first") {
    const fs::path dir = fresh_dir("provenance");
    REQUIRE(run_cli("run --experiment 2 --shots 500 --seed 9 --out-dir " +
                    dir.string()) == 0);
    const auto parsed =
        ordered_json::parse(slurp(dir / "counts_experiment2.json"));
    REQUIRE(parsed.contains("provenance"));
    CHECK(parsed.begin().key() == "provenance");
    CHECK(parsed["provenance"]["seed"] == 9);
    CHECK(parsed["provenance"]["version"].is_string());
    const std::string command = parsed["provenance"]["command"].get<std::string>();
    CHECK(command.find("--shots 500") != std::string::npos);
}

TEST_CASE("the out-dir environment variable stands in for the flag") {
    const fs::path dir = fresh_dir("env");
    REQUIRE(run_cli("run --experiment 3 --shots 400 --seed 3",
                    nullptr, "MERMIN_OUT_DIR=" + dir.string() + " ") == 0);
    CHECK(fs::exists(dir / "counts_experiment3.json"));
}

TEST_CASE("analyzing the bundled sums reproduces the reference statistic") {
    const fs::path dir = fresh_dir("sums");
    std::string output;
    const std::string sums = std::string(MERMIN_DATA_DIR) + "/reference_sums.json";
    REQUIRE(run_cli("analyze --sums " + sums + " --out " +
                        (dir / "report.json").string(),
                    &output) == 0);
    CHECK(output.find("2.235863182") != std::string::npos);
    CHECK(output.find("-0.494094901") != std::string::npos);
    const auto parsed = ordered_json::parse(slurp(dir / "report.json"));
    CHECK(std::abs(parsed["m3"].get<double>() - 2.235863182) < 1e-9);
    CHECK(parsed["seed"].is_null());
}

TEST_CASE("run plus analyze equals the in-process pipeline") {
    const fs::path dir = fresh_dir("pipeline");
    REQUIRE(run_cli("run --experiment all --shots 4000 --seed 7 --out-dir " +
                    dir.string()) == 0);
    REQUIRE(run_cli("analyze " + (dir / "counts_experiment1.json").string() + " " +
                    (dir / "counts_experiment2.json").string() + " " +
                    (dir / "counts_experiment3.json").string() + " --out " +
                    (dir / "report.json").string()) == 0);
    auto cli_report = ordered_json::parse(slurp(dir / "report.json"));
    cli_report.erase("provenance");

    std::array<mermin::CountsTable, 3> tables;
    for (int id = 1; id <= 3; ++id) {
        tables[static_cast<std::size_t>(id - 1)] = mermin::sample_counts(
            mermin::build_experiment(mermin::experiment_id_from_int(id)), 4000, 7,
            static_cast<std::uint32_t>(id));
    }
    const auto expected = ordered_json::parse(mermin::report_to_json(
        mermin::analyze_counts(tables), std::nullopt, {}));
    CHECK(cli_report == expected);
}

TEST_CASE("usage errors exit with status 2") {
    std::string output;
    CHECK(run_cli("analyze a.json b.json", &output) == 2);
    CHECK(run_cli("frobnicate", &output) == 2);
    CHECK(run_cli("run --shots 0", &output) == 2);
    CHECK(run_cli("run --experiment 7", &output) == 2);
    CHECK(run_cli("hv sample --fa 1.5", &output) == 2);
    CHECK(run_cli("hv derive --bundle matched-pair --bundles E1+", &output) == 2);
}

TEST_CASE("malformed data files exit with status 3") {
    const fs::path dir = fresh_dir("malformed");
    std::ofstream(dir / "broken.json") << "{ not json";
    std::string output;
    CHECK(run_cli("analyze --sums " + (dir / "broken.json").string(), &output) == 3);
    CHECK(run_cli("analyze " + (dir / "broken.json").string() + " " +
                      (dir / "broken.json").string() + " " +
                      (dir / "broken.json").string(),
                  &output) == 3);
    CHECK(run_cli("hv closure --graph " + (dir / "missing.json").string(),
                  &output) == 3);
}

TEST_CASE("the classical bound command reports the window") {
    std::string output;
    REQUIRE(run_cli("hv bound", &output) == 0);
    CHECK(output.find("deterministic strategies: 64") != std::string::npos);
    CHECK(output.find("min -2") != std::string::npos);
    CHECK(output.find("max 2") != std::string::npos);
    REQUIRE(run_cli("hv bound --json", &output) == 0);
    const auto parsed = ordered_json::parse(output);
    CHECK(parsed["min"] == -2);
    CHECK(parsed["max"] == 2);
}

TEST_CASE("derivations print their verdicts") {
    std::string output;
    REQUIRE(run_cli("hv derive --bundle matched-pair", &output) == 0);
    CHECK(output.find("{n} vs {e}: Arranged") != std::string::npos);
    CHECK(output.find("closure trace:") != std::string::npos);
    REQUIRE(run_cli("hv derive --bundle cartesian-pair", &output) == 0);
    CHECK(output.find("{n} vs {e}: Disarranged") != std::string::npos);
    REQUIRE(run_cli("hv derive --bundle mediator --json", &output) == 0);
    const auto parsed = ordered_json::parse(output);
    CHECK(parsed["verdict"] == "Arranged");
    CHECK(run_cli("hv derive --bundle no-such-preset", &output) == 2);
}

TEST_CASE("closure command reports its trace and writes the closed graph") {
    const fs::path dir = fresh_dir("closure");
    const fs::path graph_path = dir / "graph.json";
    mermin::hv::save_graph(
        mermin::hv::expand_bundles(mermin::hv::bundle_preset("mediator")),
        graph_path.string());
    std::string output;
    REQUIRE(run_cli("hv closure --graph " + graph_path.string() + " --out " +
                        (dir / "closed.json").string(),
                    &output) == 0);
    CHECK(output.find("closure added") != std::string::npos);
    const mermin::hv::RelationGraph closed =
        mermin::hv::load_graph((dir / "closed.json").string());
    CHECK(closed.has_edge("n", "+", "e", "+"));

    REQUIRE(run_cli("hv closure --graph " + graph_path.string() + " --consistent",
                    &output) == 0);
    CHECK(output.find("closure added") != std::string::npos);
}

TEST_CASE("hidden-variable sampling feeds the analyzer") {
    const fs::path dir = fresh_dir("hv_sample");
    REQUIRE(run_cli("hv sample --fa 1.0 --shots 1500 --seed 4 --out-dir " +
                    dir.string()) == 0);
    std::string output;
    REQUIRE(run_cli("analyze " + (dir / "hv_counts_experiment1.json").string() +
                        " " + (dir / "hv_counts_experiment2.json").string() + " " +
                        (dir / "hv_counts_experiment3.json").string() + " --out " +
                        (dir / "report.json").string(),
                    &output) == 0);
    CHECK(output.find("4.000000000") != std::string::npos);
    const auto parsed = ordered_json::parse(slurp(dir / "report.json"));
    CHECK(parsed["m3"].get<double>() == 4.0);
}

TEST_CASE("the mediator toy check passes and its negative control fails") {
    std::string output;
    REQUIRE(run_cli("toy", &output) == 0);
    CHECK(output.find("PASS") != std::string::npos);
    REQUIRE(run_cli("toy --skip-unflip", &output) == 0);
    CHECK(output.find("FAIL") != std::string::npos);
    REQUIRE(run_cli("toy --json", &output) == 0);
    const auto parsed = ordered_json::parse(output);
    CHECK(parsed["verdict"] == "PASS");
    CHECK(parsed["max_amplitude_outside_zero_slice"].get<double>() < 1e-12);
}

TEST_CASE("transpiled runs match the builder distributions statistically") {
    const fs::path dir = fresh_dir("transpiled");
    REQUIRE(run_cli("run --experiment 1 --shots 2000 --seed 6 --transpiled "
                    "--out-dir " +
                    dir.string()) == 0);
    const mermin::CountsTable table =
        mermin::load_counts((dir / "counts_experiment1.json").string());
    CHECK(table.total_shots == 2000);
    for (const auto& [key, count] : table.counts) {
        CHECK(mermin::shot_from_key(key).bits[0] == 1);
    }
}
