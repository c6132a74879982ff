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

#include "ftzne/state_vector.h"

#include <cmath>
#include <stdexcept>

#include "ftzne/errors.h"

namespace ftzne {

namespace {

using cd = std::complex<double>;
constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

StateVector::StateVector(uint32_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > kMaxQubits) {
        throw CapacityError(
            "state vector limited to " + std::to_string(kMaxQubits) + " qubits, circuit has " +
            std::to_string(num_qubits));
    }
    amps_.assign(size_t{1} << num_qubits, cd(0, 0));
    amps_[0] = 1;
}

void StateVector::apply_matrix(uint32_t q, cd m00, cd m01, cd m10, cd m11) {
    size_t bit = size_t{1} << q;
    for (size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            continue;
        }
        cd a0 = amps_[i];
        cd a1 = amps_[i | bit];
        amps_[i] = m00 * a0 + m01 * a1;
        amps_[i | bit] = m10 * a0 + m11 * a1;
    }
}

void StateVector::apply_gate1(GateKind kind, uint32_t q, double theta) {
    switch (kind) {
        case GateKind::I:
            return;
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
            apply_pauli("XYZ"[static_cast<int>(kind) - static_cast<int>(GateKind::X)], q);
            return;
        case GateKind::H:
            apply_matrix(q, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
            return;
        case GateKind::S:
            apply_matrix(q, 1, 0, 0, cd(0, 1));
            return;
        case GateKind::RY: {
            double c = std::cos(theta / 2);
            double s = std::sin(theta / 2);
            apply_matrix(q, c, -s, s, c);
            return;
        }
        case GateKind::RZ:
            apply_matrix(q, std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
            return;
        default:
            throw std::invalid_argument(std::string("not a single-qubit gate: ") + gate_name(kind));
    }
}

void StateVector::apply_gate2(GateKind kind, uint32_t control, uint32_t target) {
    size_t cb = size_t{1} << control;
    size_t tb = size_t{1} << target;
    if (kind == GateKind::CNOT) {
        for (size_t i = 0; i < amps_.size(); i++) {
            if ((i & cb) && !(i & tb)) {
                std::swap(amps_[i], amps_[i | tb]);
            }
        }
    } else if (kind == GateKind::CZ) {
        for (size_t i = 0; i < amps_.size(); i++) {
            if ((i & cb) && (i & tb)) {
                amps_[i] = -amps_[i];
            }
        }
    } else {
        throw std::invalid_argument(std::string("not a two-qubit gate: ") + gate_name(kind));
    }
}

void StateVector::apply_pauli(char letter, uint32_t q) {
    size_t bit = size_t{1} << q;
    switch (letter) {
        case 'I':
            return;
        case 'X':
            for (size_t i = 0; i < amps_.size(); i++) {
                if (!(i & bit)) {
                    std::swap(amps_[i], amps_[i | bit]);
                }
            }
            return;
        case 'Y':
            apply_matrix(q, 0, cd(0, -1), cd(0, 1), 0);
            return;
        case 'Z':
            for (size_t i = 0; i < amps_.size(); i++) {
                if (i & bit) {
                    amps_[i] = -amps_[i];
                }
            }
            return;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: ") + letter);
    }
}

void StateVector::apply_pauli(const PauliTerm &p) {
    if (p.num_qubits() != num_qubits_) {
        throw DimensionError("Pauli size does not match the state");
    }
    for (uint32_t q = 0; q < num_qubits_; q++) {
        char c = p.letter(q);
        if (c != 'I') {
            apply_pauli(c, q);
        }
    }
}

void StateVector::rotate_to_z(Basis basis, uint32_t q) {
    if (basis == Basis::X) {
        apply_gate1(GateKind::H, q);
    } else if (basis == Basis::Y) {
        apply_matrix(q, 1, 0, 0, cd(0, -1));  // S dagger
        apply_gate1(GateKind::H, q);
    }
}

void StateVector::rotate_from_z(Basis basis, uint32_t q) {
    if (basis == Basis::X) {
        apply_gate1(GateKind::H, q);
    } else if (basis == Basis::Y) {
        apply_gate1(GateKind::H, q);
        apply_gate1(GateKind::S, q);
    }
}

double StateVector::prob_one(uint32_t q) const {
    size_t bit = size_t{1} << q;
    double total = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            total += std::norm(amps_[i]);
        }
    }
    return total;
}

std::pair<double, double> StateVector::branch_weights(uint32_t q) const {
    size_t bit = size_t{1} << q;
    double w0 = 0;
    double w1 = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        (i & bit ? w1 : w0) += std::norm(amps_[i]);
    }
    return {w0, w1};
}

void StateVector::collapse(uint32_t q, bool bit, double prob) {
    size_t mask = size_t{1} << q;
    auto [w0, w1] = branch_weights(q);
    double kept = bit ? w1 : w0;
    double scale = 1 / std::sqrt(kept > 0 ? kept : prob);
    for (size_t i = 0; i < amps_.size(); i++) {
        if (bool(i & mask) == bit) {
            amps_[i] *= scale;
        } else {
            amps_[i] = 0;
        }
    }
}

double StateVector::expectation(const PauliTerm &p) const {
    StateVector copy = *this;
    copy.apply_pauli(p);
    cd total = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        total += std::conj(amps_[i]) * copy.amps_[i];
    }
    return total.real();
}

}  // namespace ftzne
