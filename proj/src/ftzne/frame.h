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

#ifndef FTZNE_FRAME_H
#define FTZNE_FRAME_H

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ftzne/bit_vec.h"
#include "ftzne/circuit.h"
#include "ftzne/executor.h"
#include "ftzne/noise.h"
#include "ftzne/pauli.h"

namespace ftzne {

/// A function of the measurement record bits (indexed as Circuit::records).
using ObservableFn = std::function<double(const BitVec &records)>;

/// Pushes a Pauli frame through the circuit from op `start` (inclusive) and
/// returns the record bits it flips. Returns nullopt when the frame meets a
/// non-Clifford rotation that it does not commute with.
std::optional<BitVec> propagate_frame(const Circuit &c, uint32_t start, PauliTerm frame);

/// Pauli-frame simulator for circuits whose faults only pass through Clifford
/// operations. A fault configuration changes the measurement record by a fixed
/// XOR mask, so noisy records are a reference record drawn from the ideal
/// circuit XOR the masks of the faults that fired.
///
/// The reference distribution is computed once by exact state-vector branch
/// enumeration, so non-Clifford state preparation before the first fault is
/// handled exactly.
class FrameSimulator {
   public:
    struct Term {
        BitVec flips;
        double probability;
    };
    struct NoisyLocation {
        uint32_t location;  // index into locations()
        bool injection;
        double total_p;
        std::vector<Term> terms;
    };

    /// Throws CapacityError when the reference enumeration exceeds `budget`.
    FrameSimulator(const Circuit &c, const NoiseModel &m, uint64_t budget);

    /// False when some noisy location cannot be propagated as a frame.
    bool valid() const {
        return valid_;
    }
    const Circuit &circuit() const {
        return circuit_;
    }
    size_t num_records() const {
        return circuit_.records.size();
    }
    /// Locations under LocationPolicy::AllOps.
    const std::vector<FaultLocation> &locations() const {
        return locations_;
    }
    const std::vector<NoisyLocation> &noisy_locations() const {
        return noisy_;
    }
    const std::vector<std::pair<BitVec, double>> &reference() const {
        return reference_;
    }

    /// Record flips caused by `local` at the AllOps location `location`, or
    /// nullopt when the fault meets a non-Clifford rotation.
    std::optional<BitVec> flips(uint32_t location, const PauliTerm &local) const;
    /// Combined flips for a configuration keyed by indices into `locs`.
    /// Throws std::logic_error when a fault cannot be propagated.
    BitVec config_flips(const std::vector<FaultLocation> &locs, const FaultConfig &config) const;

    /// One noisy record: a reference branch, independent draws at every noisy
    /// location (injection sites only when `sample_injection`), then `extra`.
    BitVec sample(std::mt19937_64 &rng, const BitVec *extra, bool sample_injection) const;

    /// Exact distribution of the XOR of fault flips. Requires at most 64
    /// records and at most `budget` distinct patterns.
    std::unordered_map<uint64_t, double> flip_distribution(bool include_injection, uint64_t budget) const;
    /// Same as flip_distribution but with every probability multiplied by a
    /// formal variable r; entry k of each vector is the coefficient of r^k.
    std::unordered_map<uint64_t, std::vector<double>> flip_polynomial(uint64_t budget) const;

    /// (sum over reference branches of P * accepted * obs, of P * accepted)
    /// for records reference XOR `flips`.
    std::pair<double, double> weigh(const BitVec &flips, const ObservableFn &obs) const;

   private:
    Circuit circuit_;
    std::vector<FaultLocation> locations_;
    // Generator flips per location: for each location qubit, X then Z.
    std::vector<std::vector<std::optional<BitVec>>> generators_;
    std::vector<NoisyLocation> noisy_;
    std::vector<std::pair<BitVec, double>> reference_;
    std::vector<double> reference_cdf_;
    bool valid_ = true;
};

}  // namespace ftzne

#endif
