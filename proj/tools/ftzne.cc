// Copyright 2026 The ftzne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ftzne/circuit.h"
#include "ftzne/codes.h"
#include "ftzne/decoder.h"
#include "ftzne/errors.h"
#include "ftzne/experiment.h"
#include "ftzne/zne.h"

namespace {

using namespace ftzne;

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitVerification = 4;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) {
        throw std::runtime_error("failed to write " + path.string());
    }
}

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    unsigned threads = 0;

    void attach(CLI::App *app) {
        app->add_option("-c,--config", config_path, "JSON experiment config");
        app->add_option("--set", overrides, "Override a config field, key=value")->take_all();
        app->add_option("--threads", threads, "Worker threads");
    }

    ExperimentConfig load(std::vector<std::string> extra = {}) const {
        std::string text = config_path.empty() ? "{}" : read_file(config_path);
        std::vector<std::string> all = overrides;
        all.insert(all.end(), extra.begin(), extra.end());
        if (threads > 0) {
            all.push_back("threads=" + std::to_string(threads));
        }
        return parse_config(text, all);
    }
};

int cmd_run(const ConfigArgs &args, const std::string &out_dir, std::vector<std::string> extra) {
    ExperimentConfig config = args.load(std::move(extra));
    std::string dir = out_dir.empty() ? config.output_dir : out_dir;
    ExperimentResult result = run_experiment(config);
    write_artifacts(result, dir);
    for (const auto &[name, contents] : result.files()) {
        std::cout << "wrote " << (std::filesystem::path(dir) / name).string() << " (" << contents.size()
                  << " bytes)\n";
    }
    return 0;
}

int cmd_verify(const ConfigArgs &args) {
    auto checks = verify_experiment(args.load());
    bool ok = true;
    for (const auto &c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitVerification;
}

int cmd_scan(
    const std::string &points_path,
    uint32_t d,
    const std::vector<uint32_t> &Ks,
    double ideal,
    const std::string &series,
    const std::string &out_path) {
    auto [corrected, uncorrected] = read_points_csv(read_file(points_path));
    std::vector<ScanEntry> entries;
    if (series == "corrected" || series == "both") {
        entries = scan_delta_eta(corrected, d, Ks, ideal);
    }
    if (series == "uncorrected" || series == "both") {
        auto raw = scan_delta_eta(uncorrected, 1, Ks, ideal);
        entries.insert(entries.end(), raw.begin(), raw.end());
    }
    std::string csv = scan_csv(entries);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
    }
    return 0;
}

int cmd_decode_check(
    const std::string &family, uint32_t d, uint32_t M, std::optional<uint32_t> t, double p, const std::string &basis) {
    BuiltCode code = family == "surface"
                         ? build_surface_d3(LogicalStateSpec::zero(), basis == "X" ? Basis::X : Basis::Z, false)
                         : build_repetition(d, M);
    uint32_t weight = t ? *t : (code.d - 1) / 2;
    NoiseModel m;
    m.injection["*"] = standard_injection(p);
    DistanceReport rep = verify_distance(code, m, weight);
    std::cout << (rep.passed() ? "PASS" : "FAIL") << " " << family << " d=" << code.d << " M=" << code.M
              << " t=" << weight << " patterns=" << rep.patterns_checked << " failures=" << rep.failures;
    if (rep.min_failing_weight) {
        std::cout << " min_failing_weight=" << *rep.min_failing_weight << " first=" << rep.first_failure;
    }
    std::cout << "\n";
    return rep.passed() ? 0 : kExitVerification;
}

int cmd_export(const ConfigArgs &args, const std::string &out_dir) {
    ExperimentConfig config = args.load();
    if (config.experiment == "scaling") {
        throw ConfigError("the scaling experiment has no circuit to export");
    }
    if (config.experiment == "surface" && !config.calibration_p) {
        config.calibration_p = 0.0;
    }
    ExperimentSetup setup = make_setup(config);
    std::string dir = out_dir.empty() ? config.output_dir : out_dir;
    std::filesystem::create_directories(dir);
    std::map<std::string, std::string> files = {
        {"circuit.txt", serialize_circuit(setup.code.circuit)},
        {"detectors.txt", detectors_text(setup.code)},
        {"logical.txt", logical_text(setup.code)},
        {"code.json", code_manifest_json(setup.code) + "\n"},
    };
    if (setup.decoder) {
        files["detector_graph.txt"] = detector_graph_text(setup.decoder->graph());
    }
    for (const auto &[name, contents] : files) {
        write_file(std::filesystem::path(dir) / name, contents);
        std::cout << "wrote " << (std::filesystem::path(dir) / name).string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Zero-noise extrapolation on error-corrected circuits"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::string run_out;
    auto *run = app.add_subcommand("run", "Run an experiment and write its CSV and JSON artifacts");
    run_args.attach(run);
    run->add_option("-o,--out", run_out, "Output directory (overrides output_dir)");

    ConfigArgs verify_args;
    auto *verify = app.add_subcommand("verify", "Run the checks reachable at the config's scale");
    verify_args.attach(verify);

    std::string scan_points;
    uint32_t scan_d = 1;
    std::vector<uint32_t> scan_K = {1};
    double scan_ideal = 1;
    std::string scan_series = "both";
    std::string scan_out;
    auto *scan = app.add_subcommand("scan", "Extrapolate every r subset of a points.csv file");
    scan->add_option("--points", scan_points, "points.csv to read")->required();
    scan->add_option("-d,--distance", scan_d, "Effective distance of the corrected series");
    scan->add_option("-K,--order", scan_K, "Extrapolation orders")->delimiter(',');
    scan->add_option("--ideal", scan_ideal, "Noiseless value of the observable");
    scan->add_option("--series", scan_series, "corrected, uncorrected or both")
        ->check(CLI::IsMember({"corrected", "uncorrected", "both"}));
    scan->add_option("-o,--out", scan_out, "Output CSV (stdout when omitted)");

    ConfigArgs scaling_args;
    std::string scaling_out;
    auto *scaling = app.add_subcommand("scaling", "Sweep the large-scale memory projection");
    scaling_args.attach(scaling);
    scaling->add_option("-o,--out", scaling_out, "Output directory (overrides output_dir)");

    std::string dc_family = "repetition";
    uint32_t dc_d = 3;
    uint32_t dc_M = 1;
    std::optional<uint32_t> dc_t;
    double dc_p = 0.036;
    std::string dc_basis = "Z";
    auto *decode = app.add_subcommand("decode-check", "Exhaustively check that low-weight faults are corrected");
    decode->add_option("--family", dc_family, "repetition or surface")
        ->check(CLI::IsMember({"repetition", "surface"}));
    decode->add_option("-d,--distance", dc_d, "Repetition code distance");
    decode->add_option("-M,--rounds", dc_M, "Repetition parity-check rounds");
    decode->add_option("-t,--weight", dc_t, "Largest fault weight (default ceil(d/2)-1)");
    decode->add_option("-p", dc_p, "Injection probability used for decoder weights");
    decode->add_option("--basis", dc_basis, "Surface readout basis")->check(CLI::IsMember({"Z", "X"}));

    ConfigArgs export_args;
    std::string export_out;
    auto *exp = app.add_subcommand("export-circuit", "Write the circuit, detectors and decoder graph of a config");
    export_args.attach(exp);
    exp->add_option("-o,--out", export_out, "Output directory (overrides output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(run_args, run_out, {});
        }
        if (*verify) {
            return cmd_verify(verify_args);
        }
        if (*scan) {
            return cmd_scan(scan_points, scan_d, scan_K, scan_ideal, scan_series, scan_out);
        }
        if (*scaling) {
            return cmd_run(scaling_args, scaling_out, {"experiment=scaling"});
        }
        if (*decode) {
            return cmd_decode_check(dc_family, dc_d, dc_M, dc_t, dc_p, dc_basis);
        }
        if (*exp) {
            return cmd_export(export_args, export_out);
        }
    } catch (const CapacityError &e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const std::invalid_argument &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
