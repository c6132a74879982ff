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

#ifndef FTZNE_STATE_VECTOR_H
#define FTZNE_STATE_VECTOR_H

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ftzne/circuit.h"
#include "ftzne/pauli.h"

namespace ftzne {

/// Dense pure state over up to kMaxQubits qubits, initialised to |0...0>.
/// Qubit q is bit q of the amplitude index.
class StateVector {
   public:
    static constexpr uint32_t kMaxQubits = 24;

    /// Throws CapacityError above kMaxQubits.
    explicit StateVector(uint32_t num_qubits);

    uint32_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<std::complex<double>> &amplitudes() const {
        return amps_;
    }

    void apply_gate1(GateKind kind, uint32_t q, double theta = 0);
    void apply_gate2(GateKind kind, uint32_t control, uint32_t target);
    /// Applies a Pauli letter 'I', 'X', 'Y' or 'Z'.
    void apply_pauli(char letter, uint32_t q);
    /// Applies every letter of `p` (the global phase is dropped).
    void apply_pauli(const PauliTerm &p);

    /// Rotates so that a Z-basis measurement reads out `basis`.
    void rotate_to_z(Basis basis, uint32_t q);
    /// Inverse of rotate_to_z.
    void rotate_from_z(Basis basis, uint32_t q);

    /// Probability of reading 1 in a Z-basis measurement of q.
    double prob_one(uint32_t q) const;
    /// Squared norms of the q=0 and q=1 halves of the state.
    std::pair<double, double> branch_weights(uint32_t q) const;
    /// Projects q onto |bit> and renormalises to unit norm. `prob` is the
    /// branch probability, used only when the kept half has zero weight.
    void collapse(uint32_t q, bool bit, double prob);

    /// Expectation value of a Hermitian Pauli (phase ignored).
    double expectation(const PauliTerm &p) const;

   private:
    void apply_matrix(uint32_t q, std::complex<double> m00, std::complex<double> m01, std::complex<double> m10,
                      std::complex<double> m11);

    uint32_t num_qubits_;
    std::vector<std::complex<double>> amps_;
};

}  // namespace ftzne

#endif
