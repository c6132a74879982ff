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

#ifndef FTZNE_EXECUTOR_H
#define FTZNE_EXECUTOR_H

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "ftzne/bit_vec.h"
#include "ftzne/circuit.h"
#include "ftzne/noise.h"
#include "ftzne/pauli.h"

namespace ftzne {

/// Default cap on the number of weighted branches visited by exact enumeration.
constexpr uint64_t kDefaultBranchBudget = uint64_t{1} << 24;

/// Branches below this probability are dropped (exact) or never chosen (shots).
constexpr double kMinBranchProbability = 1e-14;

/// Maps a fault drawn for `loc` (one letter per location qubit) to a Pauli on
/// the whole register. Measurement faults are specified relative to a Z-basis
/// readout, so for an X-basis measurement the X and Z letters are exchanged.
PauliTerm bind_fault(const Circuit &c, const FaultLocation &loc, const PauliTerm &local);

/// Register-wide Paulis keyed by op index. Each op carries at most one fault
/// location, so the index also fixes whether the Pauli acts before the op
/// (measurements) or after it (everything else).
using BoundFaults = std::map<uint32_t, PauliTerm>;

/// Binds a configuration whose keys index into `locs`.
BoundFaults bind_config(const Circuit &c, const std::vector<FaultLocation> &locs, const FaultConfig &config);

/// True when every POSTSELECT predicate holds on `records`.
bool post_selection_accepts(const Circuit &c, const BitVec &records);

struct ShotOutcome {
    BitVec bits;  // indexed as Circuit::records
    bool accepted = true;
};

/// Runs one pure-state trajectory: ideal operations, the fixed faults in
/// `faults`, stochastic faults drawn from `noise` (when given), Born-sampled
/// measurements and record-conditioned feedback.
ShotOutcome run_trajectory(
    const Circuit &c, const BoundFaults &faults, const NoiseModel *noise, std::mt19937_64 &rng);

/// Visits every measurement, reset and (when `noise` is given) fault branch
/// by depth-first search, calling `leaf(records, probability)` once per
/// surviving branch. With `prune_rejected`, branches failing a POSTSELECT are
/// cut as soon as the predicate is decided. Throws CapacityError once more
/// than `budget` leaves would be visited.
void enumerate_branches(
    const Circuit &c,
    const BoundFaults &faults,
    const NoiseModel *noise,
    uint64_t budget,
    bool prune_rejected,
    const std::function<void(const BitVec &records, double probability)> &leaf);

}  // namespace ftzne

#endif
