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
#include <sstream>

#include "ftzne/errors.h"
#include "ftzne/sim.h"
#include "gtest/gtest.h"

using namespace ftzne;

namespace {

ExperimentConfig small_repetition() {
    return parse_config(R"({"experiment": "repetition", "d": 3, "M": 1, "p": 0.036,
                            "r_grid": [1, 2, 3], "N_total": 200, "S": 20, "K": [1, 2], "seed": 5})");
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(experiment, config_parsing) {
    auto c = parse_config("{}");
    EXPECT_EQ(c.experiment, "repetition");
    EXPECT_EQ(c.r_grid, (std::vector<double>{1, 1.5, 2, 2.5, 3}));
    auto o = parse_config(R"({"d": 5})", {"M=2", "noise_preset=ideal", "r_grid=[1,2]", "calibration_p=0.05"});
    EXPECT_EQ(o.d, 5u);
    EXPECT_EQ(o.M, 2u);
    EXPECT_EQ(o.noise_preset, "ideal");
    EXPECT_EQ(o.r_grid, (std::vector<double>{1, 2}));
    EXPECT_EQ(o.calibration_p, 0.05);
    EXPECT_EQ(parse_config(config_to_json(o)).r_grid, o.r_grid);
    EXPECT_THROW(parse_config(R"({"bogus": 1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"d": "three"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"r_grid": [2, 3]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"d": 4})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"noise_preset": "processor9"})"), ConfigError);
    EXPECT_THROW(parse_config("{", {}), ConfigError);
    EXPECT_THROW(parse_config("{}", {"novalue"}), ConfigError);
}

TEST(experiment, repetition_run_is_deterministic) {
    auto config = small_repetition();
    auto a = run_experiment(config);
    auto b = run_experiment(config);
    EXPECT_EQ(a.files(), b.files());
    config.threads = 3;
    auto c = run_experiment(config);
    EXPECT_EQ(a.files().at("points.csv"), c.files().at("points.csv"));
    ASSERT_EQ(a.points.size(), 3u);
    EXPECT_DOUBLE_EQ(a.ideal, 1.0);
    EXPECT_EQ(a.corrected_d, 3u);
    for (const auto &row : a.points) {
        EXPECT_GT(row.corrected.mean, row.uncorrected.mean);
    }
    // K=1: 2 subsets, K=2: 1 subset, for each of the two series.
    EXPECT_EQ(a.scan.size(), 6u);
    EXPECT_EQ(a.scan[0].d, 3u);
    EXPECT_EQ(a.scan[5].d, 1u);
    std::string points = a.files().at("points.csv");
    EXPECT_EQ(points.substr(0, points.find('\n')), "r,corrected_mean,corrected_stderr,uncorrected_mean,uncorrected_stderr");
    std::string scan = a.files().at("zne_scan.csv");
    EXPECT_EQ(scan.substr(0, scan.find('\n')), "d,K,r_subset,delta,eta,delta0");
    auto series = read_points_csv(points);
    ASSERT_EQ(series.first.size(), 3u);
    EXPECT_NEAR(series.first[1].value, a.points[1].corrected.mean, 1e-11);
    EXPECT_NE(a.files().at("manifest.json").find("circuit_fnv1a"), std::string::npos);
    config.seed = 6;
    EXPECT_NE(run_experiment(config).files().at("points.csv"), points);
}

TEST(experiment, fig2_run) {
    auto config = parse_config(R"({"experiment": "fig2", "p": 0.088, "r_grid": [1, 2, 3],
                                   "N_total": 64, "S": 400, "noise_preset": "ideal"})");
    auto result = run_experiment(config);
    EXPECT_NEAR(result.ideal, std::cos(0.4 * M_PI), 1e-12);
    EXPECT_EQ(result.corrected_d, 3u);
    ASSERT_EQ(result.plans[0].total(), 64u);
    auto setup = make_setup(config);
    for (const auto &row : result.points) {
        NoiseModel m;
        m.injection["*"] = standard_injection(row.r * config.p);
        double corrected = exact_expectation(setup.code.circuit, m, setup.corrected);
        double uncorrected = exact_expectation(setup.uncorrected_circuit, m, setup.uncorrected);
        EXPECT_LT(std::abs(corrected - result.ideal), std::abs(uncorrected - result.ideal));
        EXPECT_LT(row.corrected.acceptance, 1.0);
        EXPECT_LT(std::abs(row.corrected.mean - corrected), 4 * row.corrected.std_error);
        EXPECT_LT(std::abs(row.uncorrected.mean - uncorrected), 4 * row.uncorrected.std_error);
    }
}

TEST(experiment, surface_run_with_fixed_calibration) {
    auto config = parse_config(R"({"experiment": "surface", "state": "psi", "basis": "Z", "p": 0.02,
                                   "r_grid": [1, 2], "N_total": 60, "S": 10, "calibration_p": 0.05,
                                   "noise_preset": "processor2"})");
    auto result = run_experiment(config);
    EXPECT_NEAR(result.ideal, 0.5, 1e-9);
    ASSERT_EQ(result.points.size(), 2u);
    EXPECT_EQ(result.calibration_p, 0.05);
    EXPECT_TRUE(result.bloch.empty());
}

TEST(experiment, scaling_run) {
    auto config = parse_config(R"({"experiment": "scaling", "ds": [3, 11], "K": [1]})");
    auto files = run_experiment(config).files();
    ASSERT_TRUE(files.count("scaling.csv"));
    EXPECT_EQ(files.count("points.csv"), 0u);
    EXPECT_NE(files.at("manifest.json").find("p_th"), std::string::npos);
}

TEST(experiment, write_and_cleanup) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ftzne_experiment_test";
    fs::remove_all(dir);
    auto result = run_experiment(small_repetition());
    write_artifacts(result, dir.string());
    EXPECT_EQ(slurp(dir / "points.csv"), result.files().at("points.csv"));
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
    // A directory squatting on points.csv makes the second write fail; the
    // manifest written before it is removed again.
    fs::create_directories(dir / "points.csv");
    EXPECT_ANY_THROW(write_artifacts(result, dir.string()));
    EXPECT_FALSE(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST(experiment, verify_repetition) {
    auto checks = verify_experiment(small_repetition());
    ASSERT_EQ(checks.size(), 4u);
    for (const auto &c : checks) {
        EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    }
    auto fig2 = verify_experiment(parse_config(R"({"experiment": "fig2", "p": 0.088, "N_total": 64, "S": 50})"));
    for (const auto &c : fig2) {
        EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    }
}

TEST(experiment, fnv_hash) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
