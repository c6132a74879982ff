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

#ifndef FTZNE_PAULI_H
#define FTZNE_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>

#include "ftzne/bit_vec.h"

namespace ftzne {

/// A multi-qubit Pauli operator i^phase * P_0 (x) P_1 (x) ... where each P_q is
/// one of the Hermitian Paulis I, X, Y, Z encoded by (x_q, z_q):
/// I=(0,0), X=(1,0), Z=(0,1), Y=(1,1).
///
/// The phase is kept as a power of i so products are exact (XY = iZ).
/// Observables discard the global phase when measured.
struct PauliTerm {
    uint8_t phase_exp = 0;
    BitVec xs;
    BitVec zs;

    PauliTerm() = default;
    explicit PauliTerm(size_t num_qubits) : xs(num_qubits), zs(num_qubits) {
    }

    size_t num_qubits() const {
        return xs.size();
    }

    /// Single-qubit Pauli 'I', 'X', 'Y' or 'Z' on `qubit`.
    static PauliTerm single(size_t num_qubits, size_t qubit, char pauli);
    /// Dense form such as "XIZ" (qubit 0 first), phase +1.
    static PauliTerm from_dense(std::string_view letters);
    /// Sparse text form such as "+iX0Z3", "-Y1", "+I".
    static PauliTerm from_str(std::string_view text, size_t num_qubits);

    char letter(size_t qubit) const;
    void set_letter(size_t qubit, char pauli);

    bool is_identity() const {
        return phase_exp == 0 && !xs.any() && !zs.any();
    }

    /// Dense letters, ignoring the phase.
    std::string dense_str() const;
    std::string str() const;

    bool operator==(const PauliTerm &other) const {
        return phase_exp == other.phase_exp && xs == other.xs && zs == other.zs;
    }
    bool operator<(const PauliTerm &other) const;
};

/// a * b with the exact power of i. Throws DimensionError on size mismatch.
PauliTerm pauli_mul(const PauliTerm &a, const PauliTerm &b);

/// True iff ab = ba, from the parity of the symplectic form.
bool commutes(const PauliTerm &a, const PauliTerm &b);

/// Number of qubits acted on non-trivially.
size_t weight(const PauliTerm &a);

}  // namespace ftzne

#endif
