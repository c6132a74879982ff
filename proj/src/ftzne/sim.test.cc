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

#include "ftzne/sim.h"

#include <cmath>
#include <random>

#include "ftzne/errors.h"
#include "ftzne/random_circuit.test.h"
#include "gtest/gtest.h"

using namespace ftzne;

namespace {

Circuit one_qubit(bool flip) {
    Circuit c;
    c.num_qubits = 1;
    c.prep(Basis::Z, 0);
    if (flip) {
        c.gate(GateKind::X, 0);
    }
    c.measure(Basis::Z, 0, "m0");
    return c;
}

ObservableFn z_of(const Circuit &c, std::vector<std::string> labels) {
    ParityObservable spec;
    for (const auto &l : labels) {
        spec.records.push_back(c.record(l));
    }
    return parity_observable(spec);
}

// Injection noise on every site plus readout and two-qubit depolarizing noise.
NoiseModel random_model(std::mt19937_64 &rng) {
    NoiseModel m;
    std::uniform_real_distribution<double> p(0.0, 0.3);
    m.injection["*"] = standard_injection(p(rng));
    if (rng() % 2) {
        m.per_class[NoiseClass::Measure] = PauliMixture::bit_flip(p(rng) / 3);
    }
    if (rng() % 2) {
        m.per_class[NoiseClass::Gate2] = PauliMixture::depolarizing(2, p(rng) / 3);
    }
    return m;
}

double branch_product(const Circuit &c, const NoiseModel &m) {
    double product = 1;
    for (const auto &loc : fault_locations(c, LocationPolicy::AllOps)) {
        if (auto mix = m.mixture_for(loc)) {
            product *= double(mix->terms.size() + 1);
        }
    }
    return product;
}

ObservableFn all_final(const Circuit &c) {
    std::vector<std::string> labels;
    for (uint32_t q = 0; q < c.num_qubits; q++) {
        labels.push_back("f" + std::to_string(q));
    }
    return z_of(c, labels);
}

}  // namespace

TEST(sim, deterministic_single_qubit_shots) {
    for (bool flip : {false, true}) {
        Circuit c = one_qubit(flip);
        for (uint64_t seed = 0; seed < 20; seed++) {
            auto out = run_shot(c, NoiseModel(), seed);
            EXPECT_EQ(out.bits[0], flip);
            EXPECT_TRUE(out.accepted);
        }
    }
}

TEST(sim, bit_flip_closed_form) {
    Circuit c = one_qubit(false);
    NoiseModel m;
    m.per_class[NoiseClass::Measure] = PauliMixture::bit_flip(0.13);
    auto obs = z_of(c, {"m0"});
    for (auto method : {SimMethod::StateVector, SimMethod::Frame}) {
        EXPECT_NEAR(exact_expectation(c, m, obs, {kDefaultBranchBudget, method}), 1 - 2 * 0.13, 1e-15);
    }
}

TEST(sim, ideal_estimate_and_starvation) {
    Circuit c = one_qubit(false);
    auto est = estimate_raw(c, NoiseModel(), z_of(c, {"m0"}), 100, 1);
    EXPECT_EQ(est.mean, 1.0);
    EXPECT_EQ(est.std_error, 0.0);
    EXPECT_EQ(est.acceptance_rate, 1.0);

    c.post_select("m0", 1);
    EXPECT_THROW(estimate_raw(c, NoiseModel(), z_of(c, {"m0"}), 100, 1), StarvationError);
    EXPECT_THROW(exact_expectation(c, NoiseModel(), z_of(c, {"m0"})), StarvationError);
}

TEST(sim, capacity_errors) {
    Circuit big;
    big.num_qubits = 25;
    big.measure(Basis::Z, 0, "m");
    EXPECT_THROW(run_shot(big, NoiseModel(), 0), CapacityError);

    Circuit c;
    c.num_qubits = 1;
    for (int k = 0; k < 16; k++) {
        c.gate(GateKind::H, 0);
        c.measure(Basis::Z, 0, "m" + std::to_string(k));
    }
    EXPECT_THROW(
        exact_expectation(c, NoiseModel(), z_of(c, {"m0"}), {1000, SimMethod::StateVector}), CapacityError);
}

TEST(sim, basis_preparation_and_measurement) {
    for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
        Circuit c;
        c.num_qubits = 1;
        c.prep(b, 0);
        c.measure(b, 0, "m");
        EXPECT_NEAR(exact_expectation(c, NoiseModel(), z_of(c, {"m"}), {kDefaultBranchBudget, SimMethod::StateVector}),
                    1.0, 1e-12);
    }
    Circuit c;
    c.num_qubits = 1;
    c.gate(GateKind::RY, 0, 1.1);
    c.measure(Basis::Z, 0, "z");
    EXPECT_NEAR(exact_expectation(c, NoiseModel(), z_of(c, {"z"})), std::cos(1.1), 1e-12);
}

TEST(sim, branch_probabilities_sum_to_one) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; trial++) {
        Circuit c = random_circuit(rng);
        NoiseModel m = random_model(rng);
        if (branch_product(c, m) > 4096) {
            continue;
        }
        double total = 0;
        SCOPED_TRACE(serialize_circuit(c));
        enumerate_branches(c, {}, &m, kDefaultBranchBudget, false, [&](const BitVec &, double p) { total += p; });
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(sim, frame_and_state_vector_exact_values_agree) {
    std::mt19937_64 rng(17);
    int compared = 0;
    for (int trial = 0; trial < 150; trial++) {
        Circuit c = random_circuit(rng);
        NoiseModel m = random_model(rng);
        if (branch_product(c, m) > 4096) {
            continue;
        }
        FrameSimulator fs(c, m, kDefaultBranchBudget);
        if (!fs.valid()) {
            continue;
        }
        auto obs = all_final(c);
        try {
            double sv = exact_expectation(c, m, obs, {kDefaultBranchBudget, SimMethod::StateVector});
            double fr = exact_expectation(c, m, obs, {kDefaultBranchBudget, SimMethod::Frame});
            EXPECT_NEAR(sv, fr, 1e-10) << serialize_circuit(c);
            compared++;
        } catch (const StarvationError &) {
        }
    }
    EXPECT_GT(compared, 50);
}

TEST(sim, polynomial_reproduces_scaled_exact_value) {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; checked < 20 && trial < 500; trial++) {
        Circuit c = random_circuit(rng);
        NoiseModel m = random_model(rng);
        if (branch_product(c, m) > 4096) {
            continue;
        }
        auto obs = all_final(c);
        try {
            for (auto method : {SimMethod::StateVector, SimMethod::Auto}) {
                auto poly = expectation_polynomial(c, m, obs, LocationPolicy::AllOps, {kDefaultBranchBudget, method});
                double direct = exact_expectation(c, scale_model(m, 1.7), obs, {kDefaultBranchBudget, method});
                EXPECT_NEAR(poly.evaluate(1.7), direct, 1e-10) << serialize_circuit(c);
                EXPECT_NEAR(poly.evaluate(1.0), exact_expectation(c, m, obs), 1e-10);
                EXPECT_LE(poly.degree(1e-15), poly.n_locations);
            }
            checked++;
        } catch (const StarvationError &) {
        } catch (const DomainError &) {
        }
    }
    EXPECT_EQ(checked, 20);
}

TEST(sim, polynomial_of_ideal_model_is_constant) {
    std::mt19937_64 rng(8);
    Circuit c = random_circuit(rng, {3, 10, false, false, 3});
    NoiseModel m;
    m.injection["*"] = standard_injection(0);
    auto poly = expectation_polynomial(c, m, all_final(c), LocationPolicy::InjectionOnly);
    for (size_t k = 1; k < poly.coeffs.size(); k++) {
        EXPECT_EQ(poly.coeffs[k], 0.0);
    }
    EXPECT_NEAR(poly.coeffs[0], exact_expectation(c, NoiseModel(), all_final(c)), 1e-12);
}

TEST(sim, monte_carlo_matches_exact) {
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; checked < 12 && trial < 300; trial++) {
        Circuit c = random_circuit(rng);
        if (c.count_measurements() > 8) {
            continue;
        }
        NoiseModel m = random_model(rng);
        auto obs = all_final(c);
        try {
            double exact = exact_expectation(c, m, obs);
            bool frame = FrameSimulator(c, m, kDefaultBranchBudget).valid();
            uint64_t shots = frame ? 1000000 : 20000;
            auto est = estimate_raw(c, m, obs, shots, 1000 + trial);
            double tol = 4 * std::max(est.std_error, 1e-12);
            EXPECT_NEAR(est.mean, exact, tol) << serialize_circuit(c);
            if (checked % 3 == 0) {
                auto sv = estimate_raw(c, m, obs, 20000, 77 + trial, SimMethod::StateVector);
                EXPECT_NEAR(sv.mean, exact, 4 * std::max(sv.std_error, 1e-12)) << serialize_circuit(c);
            }
            checked++;
        } catch (const StarvationError &) {
        } catch (const CapacityError &) {
        }
    }
    EXPECT_EQ(checked, 12);
}

TEST(sim, rotations_after_faults_fall_back_to_state_vector) {
    Circuit c;
    c.num_qubits = 1;
    c.inject(0, "a");
    c.gate(GateKind::RY, 0, 0.7);
    c.measure(Basis::Z, 0, "m");
    NoiseModel m;
    m.injection["*"] = PauliMixture::bit_flip(0.2);
    EXPECT_FALSE(FrameSimulator(c, m, kDefaultBranchBudget).valid());
    // X then RY(t) gives <Z> = -cos(t), so <Z> = 0.8 cos t - 0.2 cos t.
    EXPECT_NEAR(exact_expectation(c, m, z_of(c, {"m"})), 0.6 * std::cos(0.7), 1e-12);
    EXPECT_THROW(exact_expectation(c, m, z_of(c, {"m"}), {kDefaultBranchBudget, SimMethod::Frame}),
                 std::invalid_argument);
}

TEST(sim, frame_flips_follow_cliffords) {
    Circuit c;
    c.num_qubits = 2;
    c.inject(0, "a");
    c.gate(GateKind::H, 0);
    c.gate2(GateKind::CNOT, 0, 1);
    c.measure(Basis::Z, 0, "m0");
    c.measure(Basis::X, 1, "m1");
    NoiseModel m;
    FrameSimulator fs(c, m, kDefaultBranchBudget);
    // Z on qubit 0 becomes X after H, then XX after the CNOT.
    auto z = fs.flips(0, PauliTerm::from_dense("Z"));
    ASSERT_TRUE(z.has_value());
    EXPECT_TRUE((*z)[0]);
    EXPECT_FALSE((*z)[1]);
    // X on qubit 0 becomes Z, which stays on qubit 0 through the CNOT.
    auto x = fs.flips(0, PauliTerm::from_dense("X"));
    EXPECT_FALSE((*x)[0]);
    EXPECT_FALSE((*x)[1]);
}
