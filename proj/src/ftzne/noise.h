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

#ifndef FTZNE_NOISE_H
#define FTZNE_NOISE_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftzne/circuit.h"
#include "ftzne/pauli.h"

namespace ftzne {

/// Stochastic Pauli channel: with probability p_i apply terms[i].pauli, and
/// with probability 1 - total_p() do nothing. Terms act on the qubits of the
/// location they are bound to (one letter per qubit), and the identity is
/// never listed.
struct PauliMixture {
    struct Term {
        PauliTerm pauli;
        double probability;
        bool operator==(const Term &) const = default;
    };
    std::vector<Term> terms;

    double total_p() const;
    bool empty() const {
        return terms.empty();
    }
    size_t arity() const {
        return terms.empty() ? 0 : terms.front().pauli.num_qubits();
    }
    /// Checks probabilities are in [0,1], sum to at most 1, and no identity.
    void validate() const;

    /// Uniform mixture over the 3 (arity 1) or 15 (arity 2) non-identity Paulis.
    static PauliMixture depolarizing(size_t arity, double total_p);
    /// A single X flip with probability p.
    static PauliMixture bit_flip(double p);

    bool operator==(const PauliMixture &) const = default;
};

/// {X: p/3, Y: p/3, Z: p/3}; empty for p = 0. Throws DomainError outside [0,1].
PauliMixture standard_injection(double p);

/// Operation-class noise plus per-site injection channels. Gate and preparation
/// noise follows the ideal operation; measurement noise precedes it.
struct NoiseModel {
    std::map<NoiseClass, PauliMixture> per_class;
    /// Injection channels keyed by site id; the key "*" binds every site
    /// without an explicit entry.
    std::map<std::string, PauliMixture> injection;
    /// Multiplies every stored probability when the model is bound.
    double r = 1.0;

    /// The scaled channel bound to `loc`, or nullopt when it is noiseless.
    std::optional<PauliMixture> mixture_for(const FaultLocation &loc) const;
    bool is_ideal() const;

    bool operator==(const NoiseModel &) const = default;
};

/// Multiplies every error probability by r. Throws DomainError when r <= 0 or
/// when any scaled mixture would exceed total probability 1.
NoiseModel scale_model(const NoiseModel &m, double r);

/// Table-median device presets: "processor1", "processor2", "ideal".
/// `readout_override` replaces the preset readout error when given.
NoiseModel device_preset(const std::string &name, std::optional<double> readout_override = std::nullopt);

/// Noise-class name used in JSON ("prep", "gate1", "gate2", "measure").
std::string noise_class_name(NoiseClass c);
NoiseClass noise_class_from_name(const std::string &name);

std::string noise_model_to_json(const NoiseModel &m);
NoiseModel noise_model_from_json(const std::string &text);

/// Assignment of Pauli faults to locations, keyed by index into the location
/// list the config was drawn against. Absent means no error.
struct FaultConfig {
    std::map<uint32_t, PauliTerm> assignment;
    bool operator==(const FaultConfig &) const = default;
};

/// Draws each location independently: an error with the mixture's total
/// probability, then a Pauli from its conditional distribution.
FaultConfig sample_fault_config(
    const Circuit &c, const NoiseModel &m, LocationPolicy policy, uint64_t seed);

/// Keyed derivation of independent stream seeds: seed = H(experiment, a, b).
uint64_t derive_seed(uint64_t experiment_seed, uint64_t a, uint64_t b = 0);

}  // namespace ftzne

#endif
