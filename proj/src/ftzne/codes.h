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

#ifndef FTZNE_CODES_H
#define FTZNE_CODES_H

#include <cstdint>
#include <string>
#include <vector>

#include "ftzne/circuit.h"
#include "ftzne/pauli.h"

namespace ftzne {

/// Parity of a set of records that equals `expected` in the noiseless circuit.
struct Detector {
    std::vector<uint32_t> records;
    uint8_t expected = 0;
    bool operator==(const Detector &) const = default;
};

/// Records whose parity, after decoder correction, gives the logical value.
struct LogicalDef {
    std::string name;  // "Z_L", "X_L" or "Z0"
    std::vector<uint32_t> records;
    bool operator==(const LogicalDef &) const = default;
};

enum class CodeFamily { Fig2, Repetition, Surface };

struct BuiltCode {
    CodeFamily family;
    Circuit circuit;
    std::vector<Detector> detectors;
    LogicalDef logical;
    /// Injection site ids grouped by layer, in circuit order.
    std::vector<std::vector<std::string>> injection_layers;
    /// The "no correction" value of a shot is the mean over these groups of
    /// (-1)^(group parity), read from the circuit without feedback and
    /// post-selection.
    std::vector<std::vector<uint32_t>> raw_groups;
    uint32_t d = 1;
    uint32_t M = 0;
    Basis basis = Basis::Z;

    /// All injection sites in circuit order.
    std::vector<std::string> sites() const;
};

struct LogicalStateSpec {
    enum class Kind { Zero, Plus, Amplitudes };
    Kind kind = Kind::Zero;
    double alpha = 1;
    double beta = 0;

    static LogicalStateSpec zero();
    static LogicalStateSpec plus();
    /// Throws DomainError unless alpha^2 + beta^2 = 1 within 1e-10.
    static LogicalStateSpec amplitudes(double alpha, double beta);
};

/// Five-qubit feedback and post-selection example. Data qubits Q0, Q2, Q4 are
/// rotated by RY(theta_j), encoded into the syndrome qubits Q1 and Q3, exposed
/// to one injection site each, decoded, and measured. An X correction on Q0 is
/// applied when Q1 reads 1 and shots where Q3 reads 1 are discarded. The
/// logical observable is Z on Q0.
BuiltCode build_fig2_example(double theta0, double theta2, double theta4);

/// Bit-flip repetition code with d data qubits and d-1 syndrome qubits
/// alternating along a chain (data qubit i is qubit 2i). Throws
/// std::invalid_argument unless d is in {3,5,7} and M in {1..4}.
BuiltCode build_repetition(uint32_t d, uint32_t M);

/// Data-qubit index of row r, column c in the distance-3 surface code.
constexpr uint32_t surface_data(uint32_t r, uint32_t c) {
    return 3 * r + c;
}

/// Stabilizers of the distance-3 rotated surface code as data-qubit lists:
/// four X-type followed by four Z-type.
const std::vector<std::vector<uint32_t>> &surface_x_stabilizers();
const std::vector<std::vector<uint32_t>> &surface_z_stabilizers();

/// Logical operators on the 9 data qubits: X_L = X on column 1, Z_L = Z on
/// row 1. Returned on a register of `num_qubits` qubits.
PauliTerm surface_logical_x(uint32_t num_qubits = 9);
PauliTerm surface_logical_z(uint32_t num_qubits = 9);

/// Encoding circuit on the 17-qubit surface-code register (data 0..8, Z
/// syndrome qubits 9..12, X syndrome qubits 13..16) preparing
/// alpha|0_L> + beta|1_L>. Syndrome qubits are left in |0>.
Circuit prep_logical_state_circuit(const LogicalStateSpec &spec);

/// Distance-3 rotated surface code: logical state preparation, injection
/// layer, one round of X and Z parity checks, second injection layer and a
/// transversal data readout in `basis` (Z or X). With `calibration_sites`
/// every qubit gets an extra injection site named "cal<q>" right after
/// preparation.
BuiltCode build_surface_d3(const LogicalStateSpec &spec, Basis basis, bool calibration_sites = false);

/// Text exports.
std::string detectors_text(const BuiltCode &code);
std::string logical_text(const BuiltCode &code);
std::string code_manifest_json(const BuiltCode &code);

std::string code_family_name(CodeFamily f);

}  // namespace ftzne

#endif
