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

#include "ftzne/pauli.h"

#include <bit>
#include <cctype>
#include <stdexcept>

#include "ftzne/errors.h"

namespace ftzne {

namespace {

// Power of i picked up by sigma_a * sigma_b for single-qubit Hermitian Paulis.
int product_phase(bool x1, bool z1, bool x2, bool z2) {
    if (x1 && z1) {
        return int(z2) - int(x2);
    }
    if (x1) {
        return int(z2) * (2 * int(x2) - 1);
    }
    if (z1) {
        return int(x2) * (1 - 2 * int(z2));
    }
    return 0;
}

void require_same_size(const PauliTerm &a, const PauliTerm &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError(
            "Pauli terms act on different qubit counts: " + std::to_string(a.num_qubits()) + " vs " +
            std::to_string(b.num_qubits()));
    }
}

}  // namespace

PauliTerm PauliTerm::single(size_t num_qubits, size_t qubit, char pauli) {
    PauliTerm result(num_qubits);
    result.set_letter(qubit, pauli);
    return result;
}

PauliTerm PauliTerm::from_dense(std::string_view letters) {
    PauliTerm result(letters.size());
    for (size_t q = 0; q < letters.size(); q++) {
        result.set_letter(q, letters[q]);
    }
    return result;
}

PauliTerm PauliTerm::from_str(std::string_view text, size_t num_qubits) {
    PauliTerm result(num_qubits);
    size_t k = 0;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument("bad Pauli term '" + std::string(text) + "': " + why);
    };
    if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
        result.phase_exp = text[k] == '-' ? 2 : 0;
        k++;
    }
    if (k < text.size() && text[k] == 'i') {
        result.phase_exp = (result.phase_exp + 1) & 3;
        k++;
    }
    if (k < text.size() && text[k] == 'I' && k + 1 == text.size()) {
        return result;
    }
    if (k == text.size()) {
        fail("no Pauli factors");
    }
    while (k < text.size()) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[k])));
        if (c != 'X' && c != 'Y' && c != 'Z') {
            fail("expected X, Y or Z at offset " + std::to_string(k));
        }
        k++;
        size_t start = k;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
            k++;
        }
        if (start == k) {
            fail("missing qubit index at offset " + std::to_string(start));
        }
        size_t q = std::stoul(std::string(text.substr(start, k - start)));
        if (q >= num_qubits) {
            fail("qubit " + std::to_string(q) + " out of range");
        }
        if (result.letter(q) != 'I') {
            fail("qubit " + std::to_string(q) + " repeated");
        }
        result.set_letter(q, c);
    }
    return result;
}

char PauliTerm::letter(size_t qubit) const {
    return "IXZY"[int(xs[qubit]) + 2 * int(zs[qubit])];
}

void PauliTerm::set_letter(size_t qubit, char pauli) {
    switch (std::toupper(static_cast<unsigned char>(pauli))) {
        case 'I':
            xs.set(qubit, false);
            zs.set(qubit, false);
            break;
        case 'X':
            xs.set(qubit, true);
            zs.set(qubit, false);
            break;
        case 'Y':
            xs.set(qubit, true);
            zs.set(qubit, true);
            break;
        case 'Z':
            xs.set(qubit, false);
            zs.set(qubit, true);
            break;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: ") + pauli);
    }
}

std::string PauliTerm::dense_str() const {
    std::string out;
    out.reserve(num_qubits());
    for (size_t q = 0; q < num_qubits(); q++) {
        out.push_back(letter(q));
    }
    return out;
}

std::string PauliTerm::str() const {
    static const char *const kPhases[] = {"+", "+i", "-", "-i"};
    std::string out = kPhases[phase_exp & 3];
    bool any = false;
    for (size_t q = 0; q < num_qubits(); q++) {
        char c = letter(q);
        if (c != 'I') {
            out.push_back(c);
            out += std::to_string(q);
            any = true;
        }
    }
    if (!any) {
        out.push_back('I');
    }
    return out;
}

bool PauliTerm::operator<(const PauliTerm &other) const {
    if (xs != other.xs) {
        return xs < other.xs;
    }
    if (zs != other.zs) {
        return zs < other.zs;
    }
    return phase_exp < other.phase_exp;
}

PauliTerm pauli_mul(const PauliTerm &a, const PauliTerm &b) {
    require_same_size(a, b);
    PauliTerm result(a.num_qubits());
    int phase = a.phase_exp + b.phase_exp;
    auto ax = a.xs.words();
    auto az = a.zs.words();
    auto bx = b.xs.words();
    auto bz = b.zs.words();
    for (size_t w = 0; w < ax.size(); w++) {
        uint64_t overlap = (ax[w] | az[w]) & (bx[w] | bz[w]);
        while (overlap) {
            int bit = std::countr_zero(overlap);
            overlap &= overlap - 1;
            phase += product_phase(
                (ax[w] >> bit) & 1, (az[w] >> bit) & 1, (bx[w] >> bit) & 1, (bz[w] >> bit) & 1);
        }
    }
    result.phase_exp = static_cast<uint8_t>(((phase % 4) + 4) % 4);
    result.xs = a.xs ^ b.xs;
    result.zs = a.zs ^ b.zs;
    return result;
}

bool commutes(const PauliTerm &a, const PauliTerm &b) {
    require_same_size(a, b);
    return a.xs.and_parity(b.zs) == a.zs.and_parity(b.xs);
}

size_t weight(const PauliTerm &a) {
    size_t total = 0;
    auto x = a.xs.words();
    auto z = a.zs.words();
    for (size_t w = 0; w < x.size(); w++) {
        total += std::popcount(x[w] | z[w]);
    }
    return total;
}

}  // namespace ftzne
