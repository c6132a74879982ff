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

#include "ftzne/scaling.h"

#include <cmath>

#include "ftzne/zne.h"
#include "gtest/gtest.h"

using namespace ftzne;

TEST(scaling, calibration_identity) {
    auto m = LogicalRateModel::calibrated();
    EXPECT_NEAR(m.A, 0.03, 0);
    EXPECT_NEAR(m.p_th, 1e-3 * std::pow(0.03 / 2e-10, 1.0 / 6), 1e-15);
    EXPECT_NEAR(m.p_th, 0.023, 0.001);
    EXPECT_NEAR(logical_error_rate(m, 1e-3, 11) / 2e-10, 1, 1e-12);
    EXPECT_NEAR(logical_error_rate(m, m.p_th, 7), m.A, 1e-15);
    EXPECT_NEAR(logical_error_rate(m, 1e-3, 11) / logical_error_rate(m, 1e-3, 9), 1e-3 / m.p_th, 1e-12);
    EXPECT_EQ(logical_error_rate(m, 0.9, 3), 0.5);
    EXPECT_THROW(logical_error_rate(m, 1e-3, 4), std::invalid_argument);
}

TEST(scaling, memory_expectation_limits) {
    auto m = LogicalRateModel::calibrated();
    MemorySpec spec{50000000, 11, 1e-3, 1};
    double v = memory_expectation(spec, m, 1.0);
    EXPECT_NEAR(v, std::exp(-0.02), 1e-6);
    EXPECT_NEAR(1 - v, 0.02, 0.001);
    LogicalRateModel zero = m;
    zero.A = 0;
    EXPECT_EQ(memory_expectation(spec, zero, 1.0), 1.0);
    EXPECT_EQ(memory_expectation({10, 3, 0.9, 1}, m, 1.0), 0.0);
}

TEST(scaling, schedule) {
    MemorySpec spec{1, 11, 1e-3, 2};
    auto rs = spec.r_schedule();
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_EQ(rs[0], 1.0);
    EXPECT_NEAR(std::pow(rs[1], 6), 2, 1e-12);
    EXPECT_NEAR(std::pow(rs[2], 6), 3, 1e-12);
}

TEST(scaling, projection_headline_point) {
    auto m = LogicalRateModel::calibrated();
    auto proj = projected_zne({50000000, 11, 1e-3, 1}, m);
    EXPECT_NEAR(proj.coeffs[0], 2, 1e-9);
    EXPECT_NEAR(proj.coeffs[1], -1, 1e-9);
    // With P_tot = 0.01 and b = (2, -1): delta = 1 - 2e^{-0.02} + e^{-0.04}.
    double delta = 1 - 2 * std::exp(-0.02) + std::exp(-0.04);
    EXPECT_NEAR(proj.delta, delta, 1e-8);
    EXPECT_NEAR(proj.delta_ratio, delta / (1 - std::exp(-0.02)), 1e-6);
    EXPECT_NEAR(proj.eta, sampling_overhead(proj.values, proj.coeffs), 1e-12);
}

TEST(scaling, vanishing_noise_and_order) {
    auto m = LogicalRateModel::calibrated();
    auto proj = projected_zne({1, 3, 1e-4, 1}, m);
    EXPECT_LT(proj.delta_ratio, 1e-5);
    // 1 - <O>^2 ~ 4 P_L(r) = 4 P_L(1) r^e, so eta -> l1 * sum_k |b_k| r_k^e = 3 * (2 + 2).
    EXPECT_NEAR(proj.eta, 12, 1e-3);
    for (uint32_t d : {3u, 5u}) {
        double prev = 1;
        for (uint32_t K = 1; K <= 3; K++) {
            auto p = projected_zne({1000, d, 1e-3, K}, m);
            EXPECT_LE(p.delta, prev * (1 + 1e-9));
            prev = p.delta;
        }
    }
    // Past K = 1 the fit adds r^(e+1), which is not a power of r^e, so the
    // d = 11 curve is not monotone in K; only the K = 3 fit beats K = 1.
    auto k1 = projected_zne({50000000, 11, 1e-3, 1}, m);
    auto k2 = projected_zne({50000000, 11, 1e-3, 2}, m);
    auto k3 = projected_zne({50000000, 11, 1e-3, 3}, m);
    EXPECT_GT(k2.delta, k1.delta);
    EXPECT_LT(k3.delta, k1.delta);
}

TEST(scaling, bias_bounds_examples) {
    auto m = LogicalRateModel::calibrated();
    LogicalRateModel zero = m;
    zero.A = 0;
    MemorySpec spec{50000000, 11, 1e-3, 1};
    auto b0 = bias_bounds(spec, zero, {1, 2}, {2, -1});
    EXPECT_EQ(b0.delta_tilde_0, 0);
    EXPECT_EQ(b0.delta_tilde_1, 0);
    auto one = bias_bounds(spec, m, {1}, {1});
    EXPECT_NEAR(one.delta_tilde_0, std::expm1(0.02), 1e-9);
    EXPECT_NEAR(one.delta_tilde_0, 0.0202, 1e-4);
    for (double p : {2e-4, 5e-4, 1e-3, 1.5e-3}) {
        MemorySpec s{50000000, 11, p, 1};
        auto proj = projected_zne(s, m);
        auto bb = bias_bounds(s, m, proj.rs, proj.coeffs);
        double series = 0;
        bool small = true;
        for (size_t k = 0; k < proj.rs.size(); k++) {
            double pt = s.N * logical_error_rate(m, proj.rs[k] * p, s.d);
            small = small && pt <= 0.05;
            series += 2 * std::abs(proj.coeffs[k]) * pt * pt;
        }
        if (small && series > 0) {
            EXPECT_NEAR(bb.delta_tilde_1 / series, 1, 0.05);
        }
    }
    EXPECT_DOUBLE_EQ(one.delta_tilde_2([](double) { return 0.0; }), 0.0);
    EXPECT_DOUBLE_EQ(one.delta_tilde_2([](double) { return 1e-9; }), 2 * 50000000 * 1e-9);
}

TEST(scaling, suppression_with_distance_and_bound_validity) {
    auto m = LogicalRateModel::calibrated();
    double prev = 1e300;
    for (uint32_t d = 3; d <= 11; d += 2) {
        auto proj = projected_zne({50000000, d, 1e-3, 1}, m);
        if (proj.delta0 < 1 - 1e-12) {
            EXPECT_LT(proj.delta_ratio, prev);
            prev = proj.delta_ratio;
        }
    }
    for (double p : {1e-4, 5e-4, 1e-3, 2e-3}) {
        for (uint32_t d : {7u, 9u, 11u}) {
            for (uint64_t N : {1000ull, 1000000ull, 50000000ull}) {
                MemorySpec s{N, d, p, 1};
                auto proj = projected_zne(s, m);
                auto bb = bias_bounds(s, m, proj.rs, proj.coeffs);
                double d2 = bb.delta_tilde_2([&](double r) { return model_residual(s, m, r); });
                EXPECT_LE(proj.delta, bb.delta_tilde_1 + d2 + 1e-12) << p << " " << d << " " << N;
            }
        }
    }
}

TEST(scaling, csv) {
    auto rows = scaling_sweep(LogicalRateModel::calibrated(), {1e-3}, {3, 5}, {50000000}, {1});
    std::string csv = scaling_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,d,N,K,delta_ratio,eta,delta0,delta_tilde_1");
    EXPECT_NE(csv.find("\n0.001,3,50000000,1,"), std::string::npos);
}
