#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mermin/analysis.hpp"
#include "mermin/circuit.hpp"
#include "mermin/counts.hpp"
#include "mermin/experiments.hpp"
#include "mermin/hv/bound.hpp"
#include "mermin/hv/mixture.hpp"
#include "mermin/hv/relations.hpp"
#include "mermin/noise.hpp"
#include "mermin/sampler.hpp"
#include "mermin/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDataFormat = 3;
constexpr int kExitInternal = 4;

std::string g_command_line;

ordered_json provenance(std::optional<std::uint64_t> seed) {
    ordered_json j;
    j["command"] = g_command_line;
    if (seed.has_value()) {
        j["seed"] = *seed;
    } else {
        j["seed"] = nullptr;
    }
    j["version"] = mermin::kVersion;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

// Re-emits a JSON document with a provenance block as the first key.
std::string with_provenance(const std::string& json_text,
                            std::optional<std::uint64_t> seed) {
    const ordered_json body = ordered_json::parse(json_text);
    ordered_json out;
    out["provenance"] = provenance(seed);
    for (const auto& [key, value] : body.items()) {
        out[key] = value;
    }
    return out.dump(2) + "\n";
}

// "q1=0.0881,q3=0.1" -> NoiseModel; throws std::invalid_argument on junk.
mermin::NoiseModel parse_noise(const std::vector<std::string>& entries) {
    mermin::NoiseModel model;
    for (const auto& entry : entries) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || entry.size() < 4 || entry[0] != 'q') {
            throw std::invalid_argument("noise entries look like q1=0.05, got '" +
                                        entry + "'");
        }
        int qubit = 0;
        double p = 0.0;
        try {
            qubit = std::stoi(entry.substr(1, eq - 1));
            p = std::stod(entry.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed noise entry '" + entry + "'");
        }
        model.readout_flip[qubit] = p;
    }
    mermin::validate_noise(model);
    return model;
}

struct RunConfig {
    std::string experiment = "all";
    std::uint64_t shots = 8000;
    std::uint64_t seed = 42;
    std::vector<std::string> noise_entries;
    std::string out_dir = ".";
    bool transpiled = false;
    bool serial = false;
};

int cmd_run(const RunConfig& config) {
    const mermin::NoiseModel noise = parse_noise(config.noise_entries);
    std::vector<int> ids;
    if (config.experiment == "all") {
        ids = {1, 2, 3};
    } else {
        ids = {std::stoi(config.experiment)};
    }
    std::filesystem::create_directories(config.out_dir);
    for (int id : ids) {
        const mermin::ExperimentId eid = mermin::experiment_id_from_int(id);
        const mermin::Circuit circuit = config.transpiled
                                            ? mermin::build_transpiled_experiment(eid)
                                            : mermin::build_experiment(eid);
        const mermin::CountsTable table = mermin::sample_counts(
            circuit, config.shots, config.seed, static_cast<std::uint32_t>(id),
            noise, !config.serial);
        const auto base = std::filesystem::path(config.out_dir) /
                          ("counts_experiment" + std::to_string(id));
        write_text_file(base.string() + ".json",
                        with_provenance(mermin::counts_to_json(table), config.seed));
        write_text_file(base.string() + ".csv", mermin::counts_to_csv(table));
        std::cout << "experiment " << id << ": " << table.total_shots
                  << " shots -> " << base.string() << ".{json,csv}\n";
    }
    return kExitOk;
}

struct AnalyzeConfig {
    std::vector<std::string> counts_paths;
    std::string sums_path;
    std::string out_path;
    std::string out_dir = ".";
};

int cmd_analyze(const AnalyzeConfig& config) {
    mermin::MerminReport report;
    if (!config.sums_path.empty()) {
        if (!config.counts_paths.empty()) {
            throw std::invalid_argument("--sums excludes counts paths");
        }
        report = mermin::report_from_sums_json_file(config.sums_path);
    } else {
        if (config.counts_paths.size() != 3) {
            throw std::invalid_argument("analyze needs exactly 3 counts files, got " +
                                        std::to_string(config.counts_paths.size()));
        }
        std::array<mermin::CountsTable, 3> tables;
        for (std::size_t i = 0; i < 3; ++i) {
            tables[i] = mermin::load_counts(config.counts_paths[i]);
        }
        report = mermin::analyze_counts(tables);
    }
    std::cout << mermin::report_to_text(report);
    std::filesystem::path out = config.out_path.empty()
                                    ? std::filesystem::path(config.out_dir) / "report.json"
                                    : std::filesystem::path(config.out_path);
    if (out.has_parent_path()) {
        std::filesystem::create_directories(out.parent_path());
    }
    write_text_file(out, with_provenance(
                             mermin::report_to_json(report, std::nullopt, {}),
                             std::nullopt));
    std::cout << "report -> " << out.string() << "\n";
    return kExitOk;
}

std::string edge_line(const mermin::hv::Edge& e) {
    return "(" + e.a.set + "," + e.a.block + ") -- (" + e.b.set + "," + e.b.block + ")";
}

struct ClosureConfig {
    std::string graph_path;
    std::string out_path;
    bool consistent = false;
};

int cmd_hv_closure(const ClosureConfig& config) {
    const mermin::hv::RelationGraph graph = mermin::hv::load_graph(config.graph_path);
    const mermin::hv::ClosureResult result =
        config.consistent ? mermin::hv::consistent_closure(graph)
                          : mermin::hv::symmetric_transitive_closure(graph);
    std::cout << "closure added " << result.added.size() << " edge(s)\n";
    for (const auto& e : result.added) {
        std::cout << "  + " << edge_line(e) << "\n";
    }
    if (!config.out_path.empty()) {
        write_text_file(config.out_path,
                        with_provenance(mermin::hv::graph_to_json(result.graph),
                                        std::nullopt));
        std::cout << "closed graph -> " << config.out_path << "\n";
    }
    return kExitOk;
}

struct DeriveConfig {
    std::string preset;
    std::vector<std::string> bundles;
    bool json = false;
};

int cmd_hv_derive(const DeriveConfig& config) {
    std::vector<std::string> tokens = config.bundles;
    if (!config.preset.empty()) {
        if (!tokens.empty()) {
            throw std::invalid_argument("--bundle excludes --bundles");
        }
        tokens = mermin::hv::bundle_preset(config.preset);
    }
    if (tokens.empty()) {
        throw std::invalid_argument("derive needs --bundle or --bundles");
    }
    const mermin::hv::DerivationReport report =
        mermin::hv::derive_environment_relation(tokens);
    if (config.json) {
        ordered_json j;
        j["provenance"] = provenance(std::nullopt);
        j["bundles"] = report.bundles;
        j["added_edges"] = ordered_json::array();
        for (const auto& e : report.closure.added) {
            j["added_edges"].push_back(ordered_json::array(
                {e.a.set, e.a.block, e.b.set, e.b.block}));
        }
        j["verdict"] = mermin::hv::to_string(report.verdict);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "assumptions:";
    for (const auto& token : tokens) {
        std::cout << " " << token;
    }
    std::cout << "\nclosure trace:\n";
    for (const auto& e : report.closure.added) {
        std::cout << "  + " << edge_line(e) << "\n";
    }
    std::cout << "{n} vs {e}: " << mermin::hv::to_string(report.verdict) << "\n";
    return kExitOk;
}

struct HvSampleConfig {
    double fa = 0.0;
    std::uint64_t shots = 8000;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    bool serial = false;
};

int cmd_hv_sample(const HvSampleConfig& config) {
    const auto tables = mermin::hv::sample_hv_shots(config.fa, config.shots,
                                                    config.seed, !config.serial);
    std::filesystem::create_directories(config.out_dir);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto base = std::filesystem::path(config.out_dir) /
                          ("hv_counts_experiment" + std::to_string(i + 1));
        write_text_file(base.string() + ".json",
                        with_provenance(mermin::counts_to_json(tables[i]), config.seed));
        write_text_file(base.string() + ".csv", mermin::counts_to_csv(tables[i]));
        std::cout << "experiment " << (i + 1) << ": " << tables[i].total_shots
                  << " shots -> " << base.string() << ".{json,csv}\n";
    }
    return kExitOk;
}

int cmd_hv_bound(bool json) {
    const auto [min_value, max_value] = mermin::hv::classical_bound_oracle();
    if (json) {
        ordered_json j;
        j["provenance"] = provenance(std::nullopt);
        j["strategies"] = 64;
        j["min"] = min_value;
        j["max"] = max_value;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "deterministic strategies: 64\n";
        std::cout << "min " << min_value << "\n";
        std::cout << "max " << max_value << "\n";
    }
    return kExitOk;
}

int cmd_toy(bool skip_unflip, bool json) {
    const mermin::Circuit circuit = mermin::build_toy_circuit(!skip_unflip);
    const mermin::Statevector state = circuit.final_state();
    // q1..q5 are restored iff no amplitude outside the q1..q5 = 0 slice.
    double worst = 0.0;
    for (std::size_t index = 0; index < state.dim(); ++index) {
        if ((index & 0b111110u) != 0) {
            worst = std::max(worst, std::abs(state.amplitudes[index]));
        }
    }
    const bool pass = worst < 1e-12;
    if (json) {
        ordered_json j;
        j["provenance"] = provenance(std::nullopt);
        j["circuit"] = circuit.label;
        j["max_amplitude_outside_zero_slice"] = worst;
        j["verdict"] = pass ? "PASS" : "FAIL";
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "mediator trace (" << circuit.label << "):\n";
    for (const auto& op : circuit.ops) {
        if (const auto* gate = std::get_if<mermin::GateOp>(&op)) {
            std::cout << "  " << mermin::gate_name(gate->kind);
            if (gate->is_controlled()) {
                std::cout << " q" << gate->control << " -> q" << gate->target;
            } else {
                std::cout << " q" << gate->target;
            }
            std::cout << "\n";
        }
    }
    std::cout << "mediator stage restores |00000> on q1..q5: "
              << (pass ? "PASS" : "FAIL") << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) cmd << ' ';
        cmd << argv[i];
    }
    g_command_line = cmd.str();

    CLI::App app{"GHZ/Mermin experiment simulator and analysis toolkit"};
    app.require_subcommand(1);

    RunConfig run_config;
    CLI::App* run = app.add_subcommand("run", "simulate experiments and write counts");
    run->add_option("-e,--experiment", run_config.experiment,
                    "experiment to run: 1, 2, 3 or all")
        ->check(CLI::IsMember({"1", "2", "3", "all"}))
        ->capture_default_str();
    run->add_option("-n,--shots", run_config.shots, "shots per experiment")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("-s,--seed", run_config.seed, "random seed")->capture_default_str();
    run->add_option("--noise-p", run_config.noise_entries,
                    "readout flip probabilities, e.g. q1=0.0881,q2=0.0881")
        ->delimiter(',');
    run->add_option("-o,--out-dir", run_config.out_dir, "output directory")
        ->envname("MERMIN_OUT_DIR")
        ->capture_default_str();
    run->add_flag("--transpiled", run_config.transpiled,
                  "use the expanded two-qubit-gate schedule");
    run->add_flag("--serial", run_config.serial, "disable parallel sampling");

    AnalyzeConfig analyze_config;
    CLI::App* analyze =
        app.add_subcommand("analyze", "evaluate the Mermin statistic from counts");
    analyze->add_option("counts", analyze_config.counts_paths,
                        "three counts files (experiment 1, 2, 3)");
    analyze->add_option("--sums", analyze_config.sums_path,
                        "signed-sums fixture JSON instead of counts files");
    analyze->add_option("--out", analyze_config.out_path, "report JSON path");
    analyze->add_option("-o,--out-dir", analyze_config.out_dir,
                        "directory for the default report path")
        ->envname("MERMIN_OUT_DIR")
        ->capture_default_str();

    CLI::App* hv = app.add_subcommand("hv", "hidden-variable relation tools");
    hv->require_subcommand(1);

    ClosureConfig closure_config;
    CLI::App* closure = hv->add_subcommand("closure", "close a relation graph");
    closure->add_option("--graph", closure_config.graph_path, "relation graph JSON")
        ->required();
    closure->add_option("--out", closure_config.out_path, "closed graph JSON path");
    closure->add_flag("--consistent", closure_config.consistent,
                      "restrict transitive chains to one block per set");

    DeriveConfig derive_config;
    CLI::App* derive = hv->add_subcommand("derive", "derive the {n}-{e} relation");
    derive->add_option("--bundle", derive_config.preset,
                       "preset: cartesian-pair, matched-pair, mediator, env-direct, "
                       "env-split");
    derive->add_option("--bundles", derive_config.bundles,
                       "explicit assumption tokens, e.g. E1+,E1-,E2+,E2-,E3,RM1,RM2")
        ->delimiter(',');
    derive->add_flag("--json", derive_config.json, "machine-readable output");

    HvSampleConfig hv_sample_config;
    CLI::App* hv_sample = hv->add_subcommand("sample", "sample the mixture source");
    hv_sample->add_option("--fa", hv_sample_config.fa,
                          "arranged fraction in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    hv_sample->add_option("-n,--shots", hv_sample_config.shots,
                          "shots per setting combination")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    hv_sample->add_option("-s,--seed", hv_sample_config.seed, "random seed")
        ->capture_default_str();
    hv_sample->add_option("-o,--out-dir", hv_sample_config.out_dir, "output directory")
        ->envname("MERMIN_OUT_DIR")
        ->capture_default_str();
    hv_sample->add_flag("--serial", hv_sample_config.serial,
                        "disable parallel sampling");

    bool bound_json = false;
    CLI::App* bound = hv->add_subcommand("bound", "classical bound over 64 strategies");
    bound->add_flag("--json", bound_json, "machine-readable output");

    bool toy_skip_unflip = false;
    bool toy_json = false;
    CLI::App* toy = app.add_subcommand("toy", "mediator toy-circuit check");
    toy->add_flag("--skip-unflip", toy_skip_unflip,
                  "drop the un-flip gates (negative control)");
    toy->add_flag("--json", toy_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_config);
        if (analyze->parsed()) return cmd_analyze(analyze_config);
        if (hv->parsed()) {
            if (closure->parsed()) return cmd_hv_closure(closure_config);
            if (derive->parsed()) return cmd_hv_derive(derive_config);
            if (hv_sample->parsed()) return cmd_hv_sample(hv_sample_config);
            if (bound->parsed()) return cmd_hv_bound(bound_json);
        }
        if (toy->parsed()) return cmd_toy(toy_skip_unflip, toy_json);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mermin::UndefinedAverageError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataFormat;
    } catch (const std::runtime_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataFormat;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
