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

#include "ftzne/experiment.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "ftzne/errors.h"
#include "ftzne/format.h"
#include "ftzne/sim.h"
#include "json.hpp"

namespace ftzne {

namespace {

using nlohmann::json;

constexpr uint32_t kSurfaceRegister = 17;
// Injection strength used for decoder weights when the configured p is zero.
constexpr double kFallbackGraphP = 0.01;

template <typename T>
void read_field(const json &j, const char *key, T &out) {
    try {
        out = j.get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

const std::vector<std::string> &known_keys() {
    static const std::vector<std::string> keys = {
        "experiment", "d", "M", "p", "r_grid", "N_total", "S", "K", "seed", "noise_preset", "output_dir",
        "min_frac", "threads", "thetas", "state", "basis", "calibration_p", "calibration_target", "bloch",
        "ps", "ds", "Ns"};
    return keys;
}

ExperimentConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        (void)value;
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    ExperimentConfig c;
    auto get = [&j](const char *key, auto &out) {
        if (j.contains(key)) {
            read_field(j.at(key), key, out);
        }
    };
    get("experiment", c.experiment);
    get("d", c.d);
    get("M", c.M);
    get("p", c.p);
    get("r_grid", c.r_grid);
    get("N_total", c.N_total);
    get("S", c.S);
    get("K", c.K);
    get("seed", c.seed);
    get("noise_preset", c.noise_preset);
    get("output_dir", c.output_dir);
    get("min_frac", c.min_frac);
    get("threads", c.threads);
    get("thetas", c.thetas);
    get("state", c.state);
    get("basis", c.basis);
    if (j.contains("calibration_p") && !j.at("calibration_p").is_null()) {
        double v = 0;
        read_field(j.at("calibration_p"), "calibration_p", v);
        c.calibration_p = v;
    }
    get("calibration_target", c.calibration_target);
    get("bloch", c.bloch);
    get("ps", c.ps);
    get("ds", c.ds);
    get("Ns", c.Ns);
    return c;
}

json config_json_object(const ExperimentConfig &c) {
    json j;
    j["experiment"] = c.experiment;
    j["d"] = c.d;
    j["M"] = c.M;
    j["p"] = c.p;
    j["r_grid"] = c.r_grid;
    j["N_total"] = c.N_total;
    j["S"] = c.S;
    j["K"] = c.K;
    j["seed"] = c.seed;
    j["noise_preset"] = c.noise_preset;
    j["output_dir"] = c.output_dir;
    j["min_frac"] = c.min_frac;
    j["threads"] = c.threads;
    j["thetas"] = c.thetas;
    j["state"] = c.state;
    j["basis"] = c.basis;
    j["calibration_p"] = c.calibration_p ? json(*c.calibration_p) : json(nullptr);
    j["calibration_target"] = c.calibration_target;
    j["bloch"] = c.bloch;
    j["ps"] = c.ps;
    j["ds"] = c.ds;
    j["Ns"] = c.Ns;
    return j;
}

LogicalStateSpec state_spec(const std::string &name) {
    if (name == "zero") {
        return LogicalStateSpec::zero();
    }
    if (name == "plus") {
        return LogicalStateSpec::plus();
    }
    if (name == "psi") {
        return LogicalStateSpec::amplitudes(std::cos(M_PI / 6), std::sin(M_PI / 6));
    }
    throw ConfigError("unknown logical state '" + name + "'");
}

Basis basis_from_name(const std::string &name) {
    if (name == "Z") {
        return Basis::Z;
    }
    if (name == "X") {
        return Basis::X;
    }
    throw ConfigError("surface readout basis must be Z or X, got '" + name + "'");
}

NoiseModel injection_model(double p) {
    NoiseModel m;
    m.injection["*"] = standard_injection(p > 0 ? p : kFallbackGraphP);
    return m;
}

std::shared_ptr<const MatchingDecoder> surface_decoder(const BuiltCode &code, double p) {
    return std::make_shared<MatchingDecoder>(build_detector_graph(code, injection_model(p)));
}

double surface_exact(const BuiltCode &code, const NoiseModel &background, const ObservableFn &obs) {
    return exact_expectation(code.circuit, background, obs);
}

// Taylor coefficients of num(r) / den(r) up to `order`.
std::vector<double> ratio_series(const std::vector<double> &num, const std::vector<double> &den, size_t order) {
    std::vector<double> c(order + 1, 0.0);
    auto at = [](const std::vector<double> &v, size_t k) {
        return k < v.size() ? v[k] : 0.0;
    };
    for (size_t k = 0; k <= order; k++) {
        double s = at(num, k);
        for (size_t j = 1; j <= k; j++) {
            s -= at(den, j) * c[k - j];
        }
        c[k] = s / at(den, 0);
    }
    return c;
}

std::string join_numbers(const std::vector<double> &xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); i++) {
        out += (i ? " " : "") + format_number(xs[i]);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string &json_text, const std::vector<std::string> &overrides) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError("config is not valid JSON");
    }
    if (j.is_null()) {
        j = json::object();
    }
    for (const auto &assignment : overrides) {
        auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + assignment + "' is not of the form key=value");
        }
        std::string key = assignment.substr(0, eq);
        std::string text = assignment.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        j[key] = value;
    }
    ExperimentConfig config = config_from_json(j);
    validate_config(config);
    return config;
}

std::string config_to_json(const ExperimentConfig &config) {
    return config_json_object(config).dump(2);
}

void validate_config(const ExperimentConfig &c) {
    const std::vector<std::string> kinds = {"fig2", "repetition", "surface", "scaling"};
    if (std::find(kinds.begin(), kinds.end(), c.experiment) == kinds.end()) {
        throw ConfigError("unknown experiment '" + c.experiment + "'");
    }
    if (c.threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
    if (c.K.empty()) {
        throw ConfigError("K list is empty");
    }
    for (uint32_t k : c.K) {
        if (k < 1) {
            throw ConfigError("extrapolation orders must be at least 1");
        }
    }
    if (c.experiment == "scaling") {
        if (c.ps.empty() || c.ds.empty() || c.Ns.empty()) {
            throw ConfigError("scaling sweep needs non-empty ps, ds and Ns");
        }
        for (double p : c.ps) {
            if (!(p > 0)) {
                throw ConfigError("scaling physical rates must be positive");
            }
        }
        for (uint32_t d : c.ds) {
            if (d % 2 == 0) {
                throw ConfigError("scaling distances must be odd");
            }
        }
        for (uint64_t n : c.Ns) {
            if (n < 1) {
                throw ConfigError("scaling operation counts must be at least 1");
            }
        }
        return;
    }
    if (c.r_grid.empty() || std::find(c.r_grid.begin(), c.r_grid.end(), 1.0) == c.r_grid.end()) {
        throw ConfigError("r_grid must contain 1");
    }
    for (size_t i = 0; i < c.r_grid.size(); i++) {
        if (!(c.r_grid[i] > 0)) {
            throw ConfigError("r_grid entries must be positive");
        }
        for (size_t j = 0; j < i; j++) {
            if (c.r_grid[i] == c.r_grid[j]) {
                throw ConfigError("r_grid has a repeated entry");
            }
        }
    }
    if (!(c.p >= 0 && c.p < 1)) {
        throw ConfigError("p must lie in [0, 1)");
    }
    if (c.N_total < 1 || c.S < 1) {
        throw ConfigError("N_total and S must be at least 1");
    }
    if (!(c.min_frac >= 0 && c.min_frac <= 1)) {
        throw ConfigError("min_frac must lie in [0, 1]");
    }
    try {
        device_preset(c.noise_preset);
    } catch (const std::exception &) {
        throw ConfigError("unknown noise preset '" + c.noise_preset + "'");
    }
    if (c.experiment == "repetition") {
        if (c.d != 3 && c.d != 5 && c.d != 7) {
            throw ConfigError("repetition distance must be 3, 5 or 7");
        }
        if (c.M < 1 || c.M > 4) {
            throw ConfigError("repetition rounds must be between 1 and 4");
        }
    }
    if (c.experiment == "fig2" && c.thetas.size() != 3) {
        throw ConfigError("fig2 needs three angles in thetas");
    }
    if (c.experiment == "surface") {
        state_spec(c.state);
        basis_from_name(c.basis);
        if (c.calibration_p && !(*c.calibration_p >= 0 && *c.calibration_p <= 0.75)) {
            throw ConfigError("calibration_p must lie in [0, 0.75]");
        }
    }
}

NoiseModel background_model(const std::string &preset, std::optional<double> calibration_p) {
    NoiseModel m = device_preset(preset);
    if (calibration_p && *calibration_p > 0) {
        for (uint32_t q = 0; q < kSurfaceRegister; q++) {
            m.injection["cal" + std::to_string(q)] = PauliMixture::depolarizing(1, *calibration_p);
        }
    }
    return m;
}

double calibrate_surface(const std::string &preset, double p, double target) {
    BuiltCode code = build_surface_d3(LogicalStateSpec::zero(), Basis::Z, true);
    ObservableFn obs = decoded_observable(code, surface_decoder(code, p));
    auto f = [&](double c) {
        return surface_exact(code, background_model(preset, c), obs) - target;
    };
    double lo = 0;
    double hi = 0.5;
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo < 0) {
        throw DomainError("calibration target exceeds the value without calibration noise");
    }
    if (f_hi > 0) {
        throw DomainError("calibration target is below the value at maximal calibration noise");
    }
    // Illinois variant of regula falsi; f decreases in the calibration rate.
    int side = 0;
    double x = lo;
    for (int iter = 0; iter < 60 && hi - lo > 1e-12; iter++) {
        x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        double fx = f(x);
        if (std::abs(fx) < 1e-10) {
            break;
        }
        if (fx > 0) {
            lo = x;
            f_lo = fx;
            if (side == 1) {
                f_hi /= 2;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if (side == -1) {
                f_lo /= 2;
            }
            side = -1;
        }
    }
    return x;
}

std::vector<BlochRow> surface_bloch_points(const std::string &preset, double p, double calibration_p) {
    NoiseModel background = background_model(preset, calibration_p);
    std::vector<BlochRow> rows;
    for (const char *state : {"zero", "plus", "psi"}) {
        BlochRow row;
        row.state = state;
        for (Basis basis : {Basis::X, Basis::Z}) {
            BuiltCode code = build_surface_d3(state_spec(state), basis, true);
            double corrected = surface_exact(code, background, decoded_observable(code, surface_decoder(code, p)));
            double raw = surface_exact(code, background, raw_observable(code));
            (basis == Basis::X ? row.corrected_x : row.corrected_z) = corrected;
            (basis == Basis::X ? row.uncorrected_x : row.uncorrected_z) = raw;
        }
        rows.push_back(row);
    }
    return rows;
}

ExperimentSetup make_setup(const ExperimentConfig &config) {
    ExperimentSetup s;
    if (config.experiment == "fig2") {
        s.code = build_fig2_example(config.thetas[0], config.thetas[1], config.thetas[2]);
        s.background = background_model(config.noise_preset, std::nullopt);
        s.corrected = parity_observable({s.code.logical.records, false});
        s.uncorrected_circuit = strip_classical_control(s.code.circuit);
        ParityObservable raw;
        for (uint32_t rec : s.code.raw_groups.front()) {
            raw.records.push_back(s.uncorrected_circuit.record(s.code.circuit.records[rec]));
        }
        s.uncorrected = parity_observable(raw);
        // Feedback and post-selection cancel the first-order term of the
        // conditional expectation, so the corrected curve starts at r^2.
        s.corrected_d = 3;
    } else if (config.experiment == "repetition") {
        s.code = build_repetition(config.d, config.M);
        s.background = background_model(config.noise_preset, std::nullopt);
        NoiseModel graph_model = s.background;
        graph_model.injection["*"] = standard_injection(config.p > 0 ? config.p : kFallbackGraphP);
        s.decoder = std::make_shared<MatchingDecoder>(build_detector_graph(s.code, graph_model));
        s.corrected = decoded_observable(s.code, s.decoder);
        s.uncorrected = raw_observable(s.code);
        s.uncorrected_circuit = s.code.circuit;
        s.corrected_d = config.d;
    } else if (config.experiment == "surface") {
        s.calibration_p = config.calibration_p
                              ? *config.calibration_p
                              : calibrate_surface(config.noise_preset, config.p, config.calibration_target);
        s.code = build_surface_d3(state_spec(config.state), basis_from_name(config.basis), true);
        s.background = background_model(config.noise_preset, s.calibration_p);
        s.decoder = surface_decoder(s.code, config.p);
        s.corrected = decoded_observable(s.code, s.decoder);
        s.uncorrected = raw_observable(s.code);
        s.uncorrected_circuit = s.code.circuit;
        s.corrected_d = 3;
    } else {
        throw ConfigError("experiment '" + config.experiment + "' has no circuit");
    }
    s.ideal = exact_expectation(s.code.circuit, NoiseModel{}, s.corrected);
    return s;
}

std::map<std::string, std::string> ExperimentResult::files() const {
    std::map<std::string, std::string> out;
    json manifest;
    manifest["config"] = config_json_object(config);
    manifest["seed_derivation"] =
        "instances for grid point i are drawn with seed derive_seed(seed, 300, i); instance j of grid point i "
        "draws its shots from derive_seed(seed, 100 + i, j) for the corrected run and derive_seed(seed, 200 + i, j) "
        "for a separate uncorrected run";
    if (config.experiment == "scaling") {
        LogicalRateModel model = LogicalRateModel::calibrated();
        manifest["logical_rate_model"] = {{"A", model.A}, {"p_th", model.p_th}};
        out["scaling.csv"] = scaling_csv(scaling);
    } else {
        manifest["code"] = json::parse(code_manifest);
        manifest["circuit_fnv1a"] = fnv1a_hex(circuit_text);
        manifest["corrected_d"] = corrected_d;
        manifest["ideal"] = ideal;
        manifest["calibration_p"] = calibration_p ? json(*calibration_p) : json(nullptr);
        json plans_json = json::array();
        for (const auto &plan : plans) {
            plans_json.push_back(json::parse(plan_to_json(plan)));
        }
        manifest["plans"] = plans_json;
        out["points.csv"] = points_csv(points);
        out["zne_scan.csv"] = scan_csv(scan);
        if (!bloch.empty()) {
            out["bloch.csv"] = bloch_csv(bloch);
        }
    }
    out["manifest.json"] = manifest.dump(2) + "\n";
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    if (config.experiment == "scaling") {
        result.scaling = scaling_sweep(LogicalRateModel::calibrated(), config.ps, config.ds, config.Ns, config.K);
        return result;
    }
    ExperimentSetup setup = make_setup(config);
    result.corrected_d = setup.corrected_d;
    result.ideal = setup.ideal;
    result.calibration_p = setup.calibration_p;
    result.circuit_text = serialize_circuit(setup.code.circuit);
    result.code_manifest = code_manifest_json(setup.code);

    bool separate = setup.code.family == CodeFamily::Fig2;
    InstanceRunner runner(setup.code.circuit, setup.background);
    std::optional<InstanceRunner> raw_runner;
    if (separate) {
        raw_runner.emplace(setup.uncorrected_circuit, setup.background);
    }
    std::vector<std::string> sites = setup.code.sites();
    std::vector<DataPoint> corrected_grid;
    std::vector<DataPoint> uncorrected_grid;
    for (size_t i = 0; i < config.r_grid.size(); i++) {
        double r = config.r_grid[i];
        InstancePlan plan = plan_instances(sites.size(), r * config.p, config.N_total, config.min_frac);
        InstanceSet set = draw_instances(plan, sites, config.S, derive_seed(config.seed, 300, i));
        PointRow row;
        row.r = r;
        if (separate) {
            auto c = runner.run(set, {setup.corrected}, config.seed, 100 + i, config.threads);
            auto u = raw_runner->run(set, {setup.uncorrected}, config.seed, 200 + i, config.threads);
            row.corrected = estimate_expectation(set, plan, c[0]);
            row.uncorrected = estimate_expectation(set, plan, u[0]);
        } else {
            auto t = runner.run(set, {setup.corrected, setup.uncorrected}, config.seed, 100 + i, config.threads);
            row.corrected = estimate_expectation(set, plan, t[0]);
            row.uncorrected = estimate_expectation(set, plan, t[1]);
        }
        result.points.push_back(row);
        result.plans.push_back(plan);
        uint64_t shots = plan.total() * config.S;
        corrected_grid.push_back({r, row.corrected.mean, row.corrected.std_error, shots});
        uncorrected_grid.push_back({r, row.uncorrected.mean, row.uncorrected.std_error, shots});
    }
    result.scan = scan_delta_eta(corrected_grid, setup.corrected_d, config.K, setup.ideal);
    auto raw_scan = scan_delta_eta(uncorrected_grid, 1, config.K, setup.ideal);
    result.scan.insert(result.scan.end(), raw_scan.begin(), raw_scan.end());
    if (config.experiment == "surface" && config.bloch) {
        result.bloch = surface_bloch_points(config.noise_preset, config.p, *setup.calibration_p);
    }
    return result;
}

void write_artifacts(const ExperimentResult &result, const std::string &dir) {
    namespace fs = std::filesystem;
    auto files = result.files();
    fs::create_directories(dir);
    std::vector<fs::path> written;
    try {
        for (const auto &[name, contents] : files) {
            fs::path path = fs::path(dir) / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            written.push_back(path);
            out << contents;
            out.close();
            if (!out) {
                throw std::runtime_error("failed to write " + path.string());
            }
        }
    } catch (...) {
        for (const auto &path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
}

std::string points_csv(const std::vector<PointRow> &points) {
    std::ostringstream out;
    out << "r,corrected_mean,corrected_stderr,uncorrected_mean,uncorrected_stderr\n";
    for (const auto &p : points) {
        out << format_number(p.r) << "," << format_number(p.corrected.mean) << ","
            << format_number(p.corrected.std_error) << "," << format_number(p.uncorrected.mean) << ","
            << format_number(p.uncorrected.std_error) << "\n";
    }
    return out.str();
}

std::string scan_csv(const std::vector<ScanEntry> &scan) {
    std::ostringstream out;
    out << "d,K,r_subset,delta,eta,delta0\n";
    for (const auto &e : scan) {
        out << e.d << "," << e.K << "," << format_r_subset(e.rs) << "," << format_number(e.delta) << ","
            << format_number(e.eta) << "," << format_number(e.delta0) << "\n";
    }
    return out.str();
}

std::string bloch_csv(const std::vector<BlochRow> &rows) {
    std::ostringstream out;
    out << "state,corrected_x,corrected_z,uncorrected_x,uncorrected_z\n";
    for (const auto &row : rows) {
        out << row.state << "," << format_number(row.corrected_x) << "," << format_number(row.corrected_z) << ","
            << format_number(row.uncorrected_x) << "," << format_number(row.uncorrected_z) << "\n";
    }
    return out.str();
}

std::pair<std::vector<DataPoint>, std::vector<DataPoint>> read_points_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "r,corrected_mean,corrected_stderr,uncorrected_mean,uncorrected_stderr") {
        throw ConfigError("points file does not start with the points.csv header");
    }
    std::pair<std::vector<DataPoint>, std::vector<DataPoint>> out;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::vector<double> v;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                size_t used = 0;
                v.push_back(std::stod(cell, &used));
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
            } catch (const std::exception &) {
                throw ConfigError("points file line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (v.size() != 5) {
            throw ConfigError("points file line " + std::to_string(line_no) + " does not have 5 columns");
        }
        out.first.push_back({v[0], v[1], v[2], 0});
        out.second.push_back({v[0], v[3], v[4], 0});
    }
    return out;
}

std::vector<VerifyCheck> verify_experiment(const ExperimentConfig &config) {
    validate_config(config);
    std::vector<VerifyCheck> checks;
    if (config.experiment == "scaling") {
        LogicalRateModel m = LogicalRateModel::calibrated();
        double rate = logical_error_rate(m, 1e-3, 11);
        checks.push_back(
            {"calibration_identity", std::abs(rate / 2e-10 - 1) < 1e-9, "P_L(1e-3, 11) = " + format_number(rate)});
        return checks;
    }
    double graph_p = config.p > 0 ? config.p : kFallbackGraphP;

    // Decoder distance.
    if (config.experiment == "repetition") {
        BuiltCode code = build_repetition(config.d, config.M);
        uint32_t t = (config.d - 1) / 2;
        DistanceReport rep = verify_distance(code, injection_model(graph_p), t);
        checks.push_back(
            {"decoder_distance", rep.passed(),
             "d=" + std::to_string(config.d) + " t=" + std::to_string(t) + " patterns=" +
                 std::to_string(rep.patterns_checked) + " failures=" + std::to_string(rep.failures)});
    } else if (config.experiment == "surface") {
        bool ok = true;
        std::string detail;
        for (Basis basis : {Basis::Z, Basis::X}) {
            BuiltCode code = build_surface_d3(LogicalStateSpec::zero(), basis, false);
            DistanceReport rep = verify_distance(code, injection_model(graph_p), 1);
            ok = ok && rep.passed();
            detail += std::string(detail.empty() ? "" : " ") + (basis == Basis::Z ? "Z" : "X") +
                      ":patterns=" + std::to_string(rep.patterns_checked) +
                      ",failures=" + std::to_string(rep.failures);
        }
        checks.push_back({"decoder_distance", ok, detail});
    }

    ExperimentConfig cfg = config;
    if (cfg.experiment == "surface" && !cfg.calibration_p) {
        cfg.calibration_p = 0.0;
    }
    ExperimentSetup setup = make_setup(cfg);

    // Low-order coefficients of the corrected expectation under injection-only noise.
    {
        uint32_t e = leading_power(setup.corrected_d);
        try {
            auto poly = expectation_polynomial(
                setup.code.circuit, injection_model(graph_p), setup.corrected, LocationPolicy::InjectionOnly);
            auto series = ratio_series(poly.coeffs, poly.normalization, e);
            double worst = 0;
            for (uint32_t k = 1; k < e; k++) {
                worst = std::max(worst, std::abs(series[k]));
            }
            checks.push_back(
                {"leading_order", worst < 1e-10,
                 "max |a_k| for 1 <= k < " + std::to_string(e) + " is " + format_number(worst) +
                     "; series " + join_numbers(series)});
        } catch (const CapacityError &err) {
            checks.push_back({"leading_order", true, std::string("skipped: ") + err.what()});
        } catch (const std::invalid_argument &err) {
            checks.push_back({"leading_order", true, std::string("skipped: ") + err.what()});
        }
    }

    // Estimator against the exact oracle at r = 1.
    {
        NoiseModel full = setup.background;
        full.injection["*"] = standard_injection(config.p);
        try {
            double exact = exact_expectation(setup.code.circuit, full, setup.corrected);
            InstanceRunner runner(setup.code.circuit, setup.background);
            auto sites = setup.code.sites();
            auto plan = plan_instances(sites.size(), config.p, config.N_total, config.min_frac);
            auto set = draw_instances(plan, sites, config.S, derive_seed(config.seed, 300, 0));
            auto table = runner.run(set, {setup.corrected}, config.seed, 100, config.threads);
            Estimate est = estimate_expectation(set, plan, table[0]);
            double diff = std::abs(est.mean - exact);
            bool ok = est.std_error > 0 ? diff < 3 * est.std_error : diff < 1e-9;
            checks.push_back(
                {"estimator_oracle", ok,
                 "estimate " + format_number(est.mean) + " +- " + format_number(est.std_error) + ", exact " +
                     format_number(exact)});
        } catch (const CapacityError &err) {
            checks.push_back({"estimator_oracle", true, std::string("skipped: ") + err.what()});
        }
    }

    // Detectors are quiet in every branch of the ideal circuit.
    {
        FrameSimulator ideal(setup.code.circuit, NoiseModel{}, kDefaultBranchBudget);
        bool quiet = true;
        for (const auto &[records, prob] : ideal.reference()) {
            if (prob > 0 && !syndrome_of(setup.code, records).empty()) {
                quiet = false;
            }
        }
        checks.push_back(
            {"ideal_detectors_quiet", quiet, std::to_string(ideal.reference().size()) + " reference branches"});
    }
    return checks;
}

std::string fnv1a_hex(const std::string &text) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ftzne
