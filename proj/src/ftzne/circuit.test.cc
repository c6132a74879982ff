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

#include "ftzne/circuit.h"

#include <random>

#include "ftzne/random_circuit.test.h"
#include "gtest/gtest.h"

using namespace ftzne;

namespace {

const char *kExample = R"(QUBITS 3
# @name demo
PREP Z 0
RY 0 theta=0.5
cnot 0 1
INJECT 1 site=a
MEASURE Z 1 -> m1
FEEDBACK X 0 IF m1==1
POSTSELECT m1==0
MEASURE X 0 -> m0   # trailing comment
OBS PARITY m0
OBS PARITY m0 m1 sign=-1
)";

CircuitError::Kind error_kind(const std::string &text) {
    try {
        parse_circuit(text);
    } catch (const CircuitError &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return CircuitError::Kind::Syntax;
}

}  // namespace

TEST(circuit, parses_every_opcode) {
    Circuit c = parse_circuit(kExample);
    EXPECT_EQ(c.num_qubits, 3u);
    EXPECT_EQ(c.metadata.at("name"), "demo");
    ASSERT_EQ(c.ops.size(), 8u);
    EXPECT_EQ(std::get<Gate1Op>(c.ops[1]).theta, 0.5);
    EXPECT_EQ(std::get<Gate2Op>(c.ops[2]).target, 1u);
    EXPECT_EQ(std::get<InjectOp>(c.ops[3]).site, "a");
    EXPECT_EQ(std::get<FeedbackOp>(c.ops[5]).record, 0u);
    EXPECT_EQ(c.records, (std::vector<std::string>{"m1", "m0"}));
    ASSERT_EQ(c.observables.size(), 2u);
    EXPECT_TRUE(std::get<ParityObservable>(c.observables[1]).negate);
    EXPECT_TRUE(c.has_classical_control());
    EXPECT_EQ(c.count_measurements(), 2u);
    EXPECT_NO_THROW(validate_circuit(c));
}

TEST(circuit, errors_carry_kind_and_position) {
    try {
        parse_circuit("QUBITS 2\nPREP Z 0\nMEASURE Z 5 -> m");
        FAIL();
    } catch (const CircuitError &e) {
        EXPECT_EQ(e.kind(), CircuitError::Kind::QubitOutOfRange);
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 11u);
    }
    EXPECT_EQ(error_kind("QUBITS 1\nFOO 0"), CircuitError::Kind::UnknownOpcode);
    EXPECT_EQ(error_kind("QUBITS 1\nPOSTSELECT m==0"), CircuitError::Kind::UndefinedRecord);
    EXPECT_EQ(error_kind("QUBITS 1\nMEASURE Z 0 -> m\nMEASURE Z 0 -> m"), CircuitError::Kind::DuplicateLabel);
    EXPECT_EQ(error_kind("QUBITS 1\nINJECT 0 site=a\nINJECT 0 site=a"), CircuitError::Kind::DuplicateLabel);
    EXPECT_EQ(error_kind("QUBITS 1\nRY 0 theta=abc"), CircuitError::Kind::Syntax);
    EXPECT_EQ(error_kind("QUBITS 2\nCNOT 1 1"), CircuitError::Kind::Syntax);
    EXPECT_EQ(error_kind("PREP Z 0"), CircuitError::Kind::Syntax);
}

TEST(circuit, serialize_parse_round_trip) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; trial++) {
        Circuit c = random_circuit(rng);
        c.metadata["trial"] = std::to_string(trial);
        c.observables.push_back(ParityObservable{{0}, trial % 2 == 1});
        std::string text = serialize_circuit(c);
        Circuit back = parse_circuit(text);
        EXPECT_EQ(back, c) << text;
        EXPECT_EQ(serialize_circuit(back), text);
    }
}

TEST(circuit, fuzzed_input_only_raises_circuit_errors) {
    static const char *kTokens[] = {"QUBITS", "PREP", "X", "Y", "Z", "H", "S", "RY", "RZ", "CNOT", "CZ",
                                    "MEASURE", "FEEDBACK", "IF", "POSTSELECT", "INJECT", "OBS", "PARITY",
                                    "DECODED", "->", "m0", "m0==1", "==", "0", "1", "2", "99999999999999999999",
                                    "theta=1e308", "theta=nan", "site=a", "site=", "#", "# @k v", "\t",
                                    "-1", "sign=-1", "\x01", "\xff", "QUBITS 2\n"};
    std::mt19937_64 rng(5);
    size_t parsed = 0;
    for (int trial = 0; trial < 100000; trial++) {
        std::string text = rng() % 2 ? "QUBITS 3\n" : "";
        size_t n = rng() % 12;
        for (size_t k = 0; k < n; k++) {
            text += kTokens[rng() % std::size(kTokens)];
            text += rng() % 4 == 0 ? "\n" : " ";
        }
        try {
            parse_circuit(text);
            parsed++;
        } catch (const CircuitError &) {
        }
    }
    EXPECT_GT(parsed, 0u);
}

TEST(circuit, strip_and_locations) {
    Circuit c = parse_circuit(kExample);
    Circuit raw = strip_classical_control(c);
    EXPECT_FALSE(raw.has_classical_control());
    EXPECT_EQ(raw.ops.size(), 6u);
    auto inj = fault_locations(c, LocationPolicy::InjectionOnly);
    ASSERT_EQ(inj.size(), 1u);
    EXPECT_EQ(inj[0].site, "a");
    auto all = fault_locations(c, LocationPolicy::AllOps);
    EXPECT_EQ(all.size(), 6u);  // prep, ry, cnot, inject, two measurements
    EXPECT_TRUE(all[4].before_op());
}

TEST(circuit, builder_validates) {
    Circuit c;
    c.num_qubits = 2;
    EXPECT_THROW(c.prep(Basis::Z, 2), CircuitError);
    c.measure(Basis::Z, 0, "a");
    EXPECT_THROW(c.measure(Basis::Z, 1, "a"), CircuitError);
    EXPECT_THROW(c.post_select("b", 0), CircuitError);
    EXPECT_THROW(c.gate(GateKind::CNOT, 0), std::invalid_argument);
}
