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

#ifndef FTZNE_EXPERIMENT_H
#define FTZNE_EXPERIMENT_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftzne/codes.h"
#include "ftzne/decoder.h"
#include "ftzne/estimator.h"
#include "ftzne/noise.h"
#include "ftzne/scaling.h"
#include "ftzne/zne.h"

namespace ftzne {

/// One end-to-end experiment. Field names match the JSON keys.
struct ExperimentConfig {
    std::string experiment = "repetition";  // fig2 | repetition | surface | scaling
    uint32_t d = 3;
    uint32_t M = 1;
    double p = 0.036;
    std::vector<double> r_grid = {1, 1.5, 2, 2.5, 3};
    uint64_t N_total = 1000;
    uint64_t S = 150;
    std::vector<uint32_t> K = {1};
    uint64_t seed = 1;
    std::string noise_preset = "processor1";
    std::string output_dir = "out";
    double min_frac = 0.01;
    unsigned threads = 1;

    // fig2
    std::vector<double> thetas = {-1.2566370614359172, 0, 0};

    // surface
    std::string state = "psi";  // zero | plus | psi
    std::string basis = "Z";
    /// Depolarizing probability on the calibration sites. Solved from
    /// `calibration_target` when absent.
    std::optional<double> calibration_p;
    double calibration_target = 0.9;
    bool bloch = false;

    // scaling
    std::vector<double> ps = {1e-3};
    std::vector<uint32_t> ds = {3, 5, 7, 9, 11};
    std::vector<uint64_t> Ns = {50000000};
};

/// Parses a JSON document, then applies "key=value" overrides in order. A
/// value is read as JSON when it parses as JSON and as a string otherwise.
/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const std::string &json_text, const std::vector<std::string> &overrides = {});
std::string config_to_json(const ExperimentConfig &config);
/// Checks ranges and cross-field rules. Throws ConfigError.
void validate_config(const ExperimentConfig &config);

struct PointRow {
    double r = 1;
    Estimate corrected;
    Estimate uncorrected;
};

struct BlochRow {
    std::string state;
    double corrected_x = 0;
    double corrected_z = 0;
    double uncorrected_x = 0;
    double uncorrected_z = 0;
};

/// Everything needed to run and evaluate one code experiment.
struct ExperimentSetup {
    BuiltCode code;
    NoiseModel background;
    std::shared_ptr<const MatchingDecoder> decoder;
    ObservableFn corrected;
    ObservableFn uncorrected;
    /// Circuit the uncorrected observable is read from; the code circuit
    /// unless classical control has to be stripped.
    Circuit uncorrected_circuit;
    uint32_t corrected_d = 1;
    double ideal = 1;
    std::optional<double> calibration_p;
};

/// Builds the code, background noise (device preset plus calibration sites),
/// decoder and observables for a fig2, repetition or surface config.
ExperimentSetup make_setup(const ExperimentConfig &config);

/// Background noise of the device preset, with depolarizing channels on the
/// surface-code calibration sites when `calibration_p` is set.
NoiseModel background_model(const std::string &preset, std::optional<double> calibration_p);

/// Calibration-site depolarizing probability at which the exact corrected
/// <Z_L> of |0_L>, without injected errors, equals `target`. Solved by
/// bracketed regula falsi on [0, 0.5].
double calibrate_surface(const std::string &preset, double p, double target);

/// Exact corrected and uncorrected <X_L>, <Z_L> without injected errors for
/// |0_L>, |+_L> and |psi_L>.
std::vector<BlochRow> surface_bloch_points(const std::string &preset, double p, double calibration_p);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<PointRow> points;
    std::vector<ScanEntry> scan;  // corrected (d = corrected_d), then uncorrected (d = 1)
    std::vector<ScalingRow> scaling;
    std::vector<BlochRow> bloch;
    std::vector<InstancePlan> plans;
    uint32_t corrected_d = 1;
    double ideal = 1;
    std::optional<double> calibration_p;
    std::string circuit_text;
    std::string code_manifest;

    /// Output file name -> contents.
    std::map<std::string, std::string> files() const;
};

ExperimentResult run_experiment(const ExperimentConfig &config);

/// Writes the files into `dir` (created if missing). Files already written
/// are removed when a later write fails, and the error is rethrown.
void write_artifacts(const ExperimentResult &result, const std::string &dir);

std::string points_csv(const std::vector<PointRow> &points);
std::string scan_csv(const std::vector<ScanEntry> &scan);
std::string bloch_csv(const std::vector<BlochRow> &rows);
/// Reads points.csv back as (corrected, uncorrected) data series.
std::pair<std::vector<DataPoint>, std::vector<DataPoint>> read_points_csv(const std::string &text);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Checks reachable at the config's scale: decoder distance, the vanishing
/// low-order coefficients of the corrected expectation, the estimator against
/// the exact oracle and quiet detectors in the ideal circuit.
std::vector<VerifyCheck> verify_experiment(const ExperimentConfig &config);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string &text);

}  // namespace ftzne

#endif
