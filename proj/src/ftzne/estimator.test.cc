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

#include "ftzne/estimator.h"

#include <cmath>
#include <memory>
#include <set>

#include "ftzne/decoder.h"
#include "ftzne/errors.h"
#include "ftzne/sim.h"
#include "gtest/gtest.h"

using namespace ftzne;

namespace {

NoiseModel injection(double p) {
    NoiseModel m;
    m.injection["*"] = standard_injection(p);
    return m;
}

NoiseModel with_device(double p) {
    NoiseModel m = device_preset("processor1");
    m.injection["*"] = standard_injection(p);
    return m;
}

// d=3 one-round repetition code with processor-1 noise drawn per shot.
struct Pipeline {
    BuiltCode code = build_repetition(3, 1);
    std::shared_ptr<MatchingDecoder> decoder =
        std::make_shared<MatchingDecoder>(build_detector_graph(code, with_device(0.036)));
    ObservableFn corrected = decoded_observable(code, decoder);
    InstanceRunner runner{code.circuit, device_preset("processor1")};

    Estimate run(double rp, uint64_t n_total, uint64_t shots, uint64_t seed) const {
        auto plan = plan_instances(code.sites().size(), rp, n_total);
        auto set = draw_instances(plan, code.sites(), shots, seed);
        auto tables = runner.run(set, {corrected}, seed, 7);
        return estimate_expectation(set, plan, tables[0]);
    }
};

}  // namespace

TEST(estimator, plan_weights_and_quotas) {
    auto plan = plan_instances(6, 0.036, 1000);
    EXPECT_NEAR(plan.weights[0], std::pow(0.964, 6), 1e-12);
    EXPECT_NEAR(plan.weights[0], 0.803, 0.002);
    EXPECT_EQ(plan.quotas[0], 1u);
    EXPECT_EQ(plan.quotas[1], 18u);
    EXPECT_EQ(plan.total(), 1000u);
    // Every level gets at least the 1% floor until the budget runs out.
    for (size_t k = 0; k <= 6; k++) {
        EXPECT_LE(plan.quotas[k], available_instances(6, k));
        if (k + 1 <= 6 && plan.quotas[k + 1] > 0) {
            EXPECT_GE(plan.quotas[k], std::min<uint64_t>(10, available_instances(6, k)));
        }
    }
    double total = 0;
    for (double w : plan.weights) {
        total += w;
    }
    EXPECT_NEAR(total, 1, 1e-12);
    EXPECT_NEAR(plan_instances(14, 0.036, 6000).weights[0], 0.598, 0.002);
    EXPECT_EQ(plan_instances(14, 0.036, 6000).total(), 6000u);
}

TEST(estimator, plan_floor_and_edges) {
    auto plan = plan_instances(14, 0.036, 6000);
    uint64_t floor = 60;
    for (size_t k = 0; k < plan.quotas.size(); k++) {
        if (k + 1 < plan.quotas.size() && plan.quotas[k + 1] > 0) {
            EXPECT_GE(plan.quotas[k], std::min(floor, available_instances(14, k)));
        }
    }
    auto ideal = plan_instances(6, 0.0, 1000);
    EXPECT_EQ(ideal.quotas[0], 1u);
    EXPECT_EQ(ideal.total(), 1u);
    EXPECT_DOUBLE_EQ(ideal.uncovered_mass(), 0.0);
    EXPECT_THROW(plan_instances(6, 1.0, 1000), DomainError);
    EXPECT_THROW(plan_instances(6, -0.1, 1000), DomainError);
    EXPECT_THROW(plan_instances(6, 0.1, 0), DomainError);
    auto full = plan_instances(3, 0.1, 64);
    EXPECT_EQ(full.quotas, (std::vector<uint64_t>{1, 9, 27, 27}));
    auto scarce = plan_instances(20, 0.001, 10, 0.0);
    EXPECT_GT(scarce.uncovered_mass(), 0.0);
    EXPECT_EQ(scarce.total(), 10u);
}

TEST(estimator, draw_without_replacement) {
    auto plan = plan_instances(6, 0.036, 1000);
    std::vector<std::string> sites = build_repetition(3, 1).sites();
    auto a = draw_instances(plan, sites, 1, 1);
    auto b = draw_instances(plan, sites, 1, 1);
    auto c = draw_instances(plan, sites, 1, 2);
    EXPECT_EQ(a.instances, b.instances);
    EXPECT_NE(a.instances, c.instances);
    ASSERT_EQ(a.instances.size(), 1000u);
    EXPECT_TRUE(a.instances[0].faults.empty());
    std::set<std::vector<std::pair<uint32_t, char>>> level1;
    std::set<std::vector<std::pair<uint32_t, char>>> all;
    for (const auto &inst : a.instances) {
        EXPECT_EQ(inst.faults.size(), inst.k);
        std::set<uint32_t> distinct_sites;
        for (const auto &[site, letter] : inst.faults) {
            distinct_sites.insert(site);
            EXPECT_TRUE(letter == 'X' || letter == 'Y' || letter == 'Z');
        }
        EXPECT_EQ(distinct_sites.size(), inst.k);
        EXPECT_TRUE(all.insert(inst.faults).second);
        if (inst.k == 1) {
            level1.insert(inst.faults);
        }
    }
    EXPECT_EQ(level1.size(), 18u);
    EXPECT_NE(instances_to_json(a).find("\"site\": \"L0.q0\""), std::string::npos);
    EXPECT_NE(plan_to_json(plan).find("quotas"), std::string::npos);
}

TEST(estimator, constant_values_and_incomplete_data) {
    auto plan = plan_instances(3, 0.1, 64);
    auto set = draw_instances(plan, {"a", "b", "c"}, 4, 3);
    ShotTable table(set.instances.size(), 4);
    std::fill(table.values.begin(), table.values.end(), 1.0);
    auto est = estimate_expectation(set, plan, table);
    EXPECT_NEAR(est.mean, 1, 1e-12);
    EXPECT_NEAR(est.std_error, 0, 1e-12);
    ShotTable short_table(set.instances.size(), 3);
    EXPECT_THROW(estimate_expectation(set, plan, short_table), IncompleteDataError);
}

TEST(estimator, exhaustive_coverage_matches_exact) {
    Pipeline pl;
    double rp = 0.036 * 2;
    auto plan = plan_instances(6, rp, 4096);
    ASSERT_EQ(plan.total(), 4096u);
    auto set = draw_instances(plan, pl.code.sites(), 1, 5);
    ShotTable table(set.instances.size(), 1);
    const auto &fs = pl.runner.simulator();
    auto background = fs.flip_distribution(true, kDefaultBranchBudget);
    for (size_t i = 0; i < set.instances.size(); i++) {
        BitVec flips = pl.runner.instance_flips(set, set.instances[i]);
        double value = 0;
        for (const auto &[pattern, p] : background) {
            auto [num, den] = fs.weigh(flips ^ BitVec::from_u64(fs.num_records(), pattern), pl.corrected);
            value += p * num / den;
        }
        table.value(i, 0) = value;
    }
    double exact = exact_expectation(pl.code.circuit, with_device(rp), pl.corrected);
    EXPECT_NEAR(estimate_expectation(set, plan, table).mean, exact, 1e-12);
}

TEST(estimator, pipeline_agrees_with_exact_oracle) {
    Pipeline pl;
    auto est = pl.run(0.036, 1000, 150, 2024);
    double exact = exact_expectation(pl.code.circuit, with_device(0.036), pl.corrected);
    EXPECT_GT(est.std_error, 0);
    EXPECT_LT(std::abs(est.mean - exact), 3 * est.std_error) << est.mean << " vs " << exact;
}

TEST(estimator, replications_are_unbiased) {
    Pipeline pl;
    double rp = 0.036 * 3;
    double exact = exact_expectation(pl.code.circuit, with_device(rp), pl.corrected);
    double sum = 0;
    double sum_sq = 0;
    const int reps = 200;
    for (int rep = 0; rep < reps; rep++) {
        double m = pl.run(rp, 1000, 8, 100 + rep).mean;
        sum += m;
        sum_sq += m * m;
    }
    double mean = sum / reps;
    double var = (sum_sq - reps * mean * mean) / (reps - 1);
    EXPECT_LT(std::abs(mean - exact), 4 * std::sqrt(var / reps));
}

TEST(estimator, stderr_shrinks_with_shots) {
    Pipeline pl;
    double small = pl.run(0.036 * 3, 1000, 150, 9).std_error;
    double large = pl.run(0.036 * 3, 1000, 600, 9).std_error;
    EXPECT_NEAR(small / large, 2.0, 0.3);
}

TEST(estimator, threads_do_not_change_results) {
    Pipeline pl;
    auto plan = plan_instances(6, 0.05, 200);
    auto set = draw_instances(plan, pl.code.sites(), 20, 4);
    auto one = pl.runner.run(set, {pl.corrected}, 4, 1, 1);
    auto three = pl.runner.run(set, {pl.corrected}, 4, 1, 3);
    EXPECT_EQ(one[0].values, three[0].values);
}

TEST(estimator, post_selected_ratio_estimate) {
    auto code = build_fig2_example(0.4, 0, 0);
    InstanceRunner runner(code.circuit, {});
    auto plan = plan_instances(3, 0.2, 64);
    auto set = draw_instances(plan, code.sites(), 200, 8);
    auto obs = parity_observable({code.logical.records, false});
    auto est = estimate_expectation(set, plan, runner.run(set, {obs}, 8, 2)[0]);
    double exact = exact_expectation(code.circuit, injection(0.2), obs);
    EXPECT_LT(est.acceptance, 1.0);
    EXPECT_LT(std::abs(est.mean - exact), 4 * est.std_error);
}
