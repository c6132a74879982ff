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

#include "ftzne/codes.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ftzne/errors.h"
#include "ftzne/frame.h"
#include "ftzne/sim.h"
#include "ftzne/state_vector.h"
#include "gtest/gtest.h"

using namespace ftzne;

namespace {

std::vector<BuiltCode> all_codes() {
    std::vector<BuiltCode> codes;
    codes.push_back(build_fig2_example(0.3, -1.1, 2.0));
    for (uint32_t d : {3u, 5u, 7u}) {
        for (uint32_t M : {1u, 2u, 4u}) {
            codes.push_back(build_repetition(d, M));
        }
    }
    for (auto spec : {LogicalStateSpec::zero(), LogicalStateSpec::plus(),
                      LogicalStateSpec::amplitudes(std::cos(M_PI / 6), std::sin(M_PI / 6))}) {
        codes.push_back(build_surface_d3(spec, Basis::Z));
        codes.push_back(build_surface_d3(spec, Basis::X, true));
    }
    return codes;
}

bool detectors_quiet(const BuiltCode &code, const BitVec &records) {
    for (const auto &det : code.detectors) {
        bool parity = false;
        for (uint32_t r : det.records) {
            parity ^= records[r];
        }
        if (parity != bool(det.expected)) {
            return false;
        }
    }
    return true;
}

double logical_value(const BuiltCode &code, const NoiseModel &m = {}) {
    return exact_expectation(code.circuit, m, parity_observable({code.logical.records, false}));
}

PauliTerm data_pauli(const std::vector<uint32_t> &qubits, char letter) {
    PauliTerm p(9);
    for (uint32_t q : qubits) {
        p.set_letter(q, letter);
    }
    return p;
}

}  // namespace

TEST(codes, repetition_sizes) {
    auto code = build_repetition(3, 1);
    EXPECT_EQ(code.circuit.num_qubits, 5u);
    EXPECT_EQ(code.sites().size(), 6u);
    EXPECT_EQ(code.detectors.size(), 4u);
    EXPECT_EQ(code.injection_layers.size(), 2u);
    EXPECT_EQ(build_repetition(7, 4).circuit.num_qubits, 13u);
    for (uint32_t d : {3u, 5u, 7u}) {
        for (uint32_t M = 1; M <= 4; M++) {
            auto c = build_repetition(d, M);
            EXPECT_EQ(c.sites().size(), d * (M + 1));
            EXPECT_EQ(c.detectors.size(), (M + 1) * (d - 1));
            EXPECT_EQ(c.injection_layers.size(), M + 1);
            EXPECT_EQ(fault_locations(c.circuit, LocationPolicy::InjectionOnly).size(), d * (M + 1));
        }
    }
    EXPECT_THROW(build_repetition(4, 1), std::invalid_argument);
    EXPECT_THROW(build_repetition(3, 0), std::invalid_argument);
    EXPECT_THROW(build_repetition(9, 1), std::invalid_argument);
}

TEST(codes, ideal_detectors_are_deterministic) {
    for (const auto &code : all_codes()) {
        FrameSimulator fs(code.circuit, {}, kDefaultBranchBudget);
        for (const auto &[records, p] : fs.reference()) {
            if (post_selection_accepts(code.circuit, records)) {
                EXPECT_TRUE(detectors_quiet(code, records)) << code_manifest_json(code);
            }
        }
    }
}

TEST(codes, ideal_detectors_on_state_vector_shots) {
    auto codes = all_codes();
    for (size_t i : {size_t{0}, size_t{1}, codes.size() - 1}) {
        const auto &code = codes[i];
        uint64_t shots = code.circuit.num_qubits > 12 ? 100 : 1000;
        for (uint64_t s = 0; s < shots; s++) {
            auto out = run_shot(code.circuit, {}, derive_seed(11, i, s));
            if (out.accepted) {
                ASSERT_TRUE(detectors_quiet(code, out.bits));
            }
        }
    }
}

TEST(codes, surface_logical_algebra) {
    PauliTerm xl = surface_logical_x();
    PauliTerm zl = surface_logical_z();
    EXPECT_FALSE(commutes(xl, zl));
    for (const auto &s : surface_x_stabilizers()) {
        EXPECT_TRUE(commutes(data_pauli(s, 'X'), zl));
        EXPECT_TRUE(commutes(data_pauli(s, 'X'), xl));
        for (const auto &t : surface_z_stabilizers()) {
            EXPECT_TRUE(commutes(data_pauli(s, 'X'), data_pauli(t, 'Z')));
        }
    }
    for (const auto &s : surface_z_stabilizers()) {
        EXPECT_TRUE(commutes(data_pauli(s, 'Z'), xl));
    }
}

TEST(codes, surface_logical_states) {
    double a = std::cos(M_PI / 6);
    double b = std::sin(M_PI / 6);
    auto psi = LogicalStateSpec::amplitudes(a, b);
    EXPECT_NEAR(logical_value(build_surface_d3(psi, Basis::Z)), 0.5, 1e-10);
    EXPECT_NEAR(logical_value(build_surface_d3(psi, Basis::X)), std::sin(M_PI / 3), 1e-10);
    EXPECT_NEAR(logical_value(build_surface_d3(LogicalStateSpec::zero(), Basis::Z)), 1, 1e-12);
    EXPECT_NEAR(logical_value(build_surface_d3(LogicalStateSpec::plus(), Basis::X)), 1, 1e-10);
    EXPECT_NEAR(logical_value(build_surface_d3(LogicalStateSpec::plus(), Basis::Z)), 0, 1e-10);
    EXPECT_THROW(LogicalStateSpec::amplitudes(0.5, 0.5), DomainError);
}

TEST(codes, surface_state_is_stabilized) {
    auto code = build_surface_d3(LogicalStateSpec::amplitudes(0.6, 0.8), Basis::Z);
    Circuit prep = prep_logical_state_circuit(LogicalStateSpec::amplitudes(0.6, 0.8));
    StateVector sv(17);
    for (const auto &op : prep.ops) {
        if (const auto *g = std::get_if<Gate1Op>(&op)) {
            sv.apply_gate1(g->kind, g->qubit, g->theta);
        } else if (const auto *g2 = std::get_if<Gate2Op>(&op)) {
            sv.apply_gate2(g2->kind, g2->control, g2->target);
        }
    }
    auto widen = [](const std::vector<uint32_t> &qs, char letter) {
        PauliTerm p(17);
        for (uint32_t q : qs) {
            p.set_letter(q, letter);
        }
        return p;
    };
    for (const auto &s : surface_x_stabilizers()) {
        EXPECT_NEAR(sv.expectation(widen(s, 'X')), 1, 1e-10);
    }
    for (const auto &s : surface_z_stabilizers()) {
        EXPECT_NEAR(sv.expectation(widen(s, 'Z')), 1, 1e-10);
    }
    for (uint32_t q = 9; q < 17; q++) {
        EXPECT_NEAR(sv.prob_one(q), 0, 1e-12);
    }
    EXPECT_NEAR(sv.expectation(surface_logical_z(17)), 0.36 - 0.64, 1e-10);
    EXPECT_NEAR(sv.expectation(surface_logical_x(17)), 2 * 0.6 * 0.8, 1e-10);
    EXPECT_EQ(code.detectors.size(), 12u);
}

TEST(codes, fig2_ideal_and_feedback_repair) {
    auto ideal = build_fig2_example(0, 0, 0);
    EXPECT_NEAR(logical_value(ideal), 1, 1e-12);
    Circuit raw = strip_classical_control(ideal.circuit);
    EXPECT_NEAR(exact_expectation(raw, {}, parity_observable({ideal.logical.records, false})), 1, 1e-12);

    double theta0 = -0.4 * M_PI;
    auto code = build_fig2_example(theta0, 0.7, -0.2);
    NoiseModel forced;
    forced.injection["L0.q0"] = PauliMixture{{{PauliTerm::from_dense("X"), 1.0}}};
    EXPECT_NEAR(logical_value(code), std::cos(theta0), 1e-12);
    EXPECT_NEAR(logical_value(code, forced), std::cos(theta0), 1e-12);
    Circuit stripped = strip_classical_control(code.circuit);
    EXPECT_NEAR(
        exact_expectation(stripped, forced, parity_observable({code.logical.records, false})), -std::cos(theta0),
        1e-12);
}

TEST(codes, fig2_correction_slows_decay) {
    auto code = build_fig2_example(-0.4 * M_PI, 0, 0);
    Circuit stripped = strip_classical_control(code.circuit);
    auto obs = parity_observable({code.logical.records, false});
    double ideal = std::cos(-0.4 * M_PI);
    for (double r : {0.5, 1.0, 2.0}) {
        NoiseModel m;
        m.injection["*"] = standard_injection(0.088 * r);
        double corrected = exact_expectation(code.circuit, m, obs);
        double uncorrected = exact_expectation(stripped, m, obs);
        EXPECT_LT(std::abs(corrected - ideal), std::abs(uncorrected - ideal));
    }
}

TEST(codes, exports) {
    auto code = build_repetition(3, 1);
    std::string dets = detectors_text(code);
    EXPECT_NE(dets.find("DET 0 = s0.0 expect 0\n"), std::string::npos);
    EXPECT_NE(dets.find("DET 3 = d1^d2^s0.1 expect 0\n"), std::string::npos);
    EXPECT_EQ(logical_text(code), "LOGICAL Z_L = d0\n");
    EXPECT_NE(code_manifest_json(code).find("\"L1.q4\""), std::string::npos);
    Circuit parsed = parse_circuit(serialize_circuit(code.circuit));
    EXPECT_EQ(parsed.ops, code.circuit.ops);
}

TEST(codes, fig2_fixture_matches_builder) {
    std::ifstream in(std::string(FTZNE_TEST_DATA) + "/fig2.circuit");
    ASSERT_TRUE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    Circuit fixture = parse_circuit(ss.str());
    EXPECT_EQ(fixture.num_qubits, 5u);
    EXPECT_EQ(fixture.records.size(), 5u);
    size_t feedback = 0;
    size_t post = 0;
    size_t final_measurements = 0;
    bool after_post = false;
    for (const auto &op : fixture.ops) {
        feedback += std::holds_alternative<FeedbackOp>(op);
        post += std::holds_alternative<PostSelectOp>(op);
        after_post = after_post || std::holds_alternative<PostSelectOp>(op);
        final_measurements += after_post && std::holds_alternative<MeasureOp>(op);
    }
    EXPECT_EQ(feedback, 1u);
    EXPECT_EQ(post, 1u);
    EXPECT_EQ(final_measurements, 3u);
    EXPECT_EQ(fault_locations(fixture, LocationPolicy::InjectionOnly).size(), 3u);
    BuiltCode built = build_fig2_example(-0.4 * M_PI, 0, 0);
    ASSERT_EQ(fixture.ops.size(), built.circuit.ops.size());
    EXPECT_EQ(fixture.records, built.circuit.records);
    auto obs = parity_observable({{fixture.record("m0")}, false});
    NoiseModel m;
    m.injection["*"] = standard_injection(0.088);
    EXPECT_NEAR(
        exact_expectation(fixture, m, obs),
        exact_expectation(built.circuit, m, parity_observable({built.logical.records, false})),
        1e-10);
}
