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

#ifndef FTZNE_ESTIMATOR_H
#define FTZNE_ESTIMATOR_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ftzne/codes.h"
#include "ftzne/frame.h"
#include "ftzne/noise.h"

namespace ftzne {

/// Number of instances per error count k over `n_loc` injection sites with
/// per-site error probability `rp` (split evenly over X, Y and Z).
struct InstancePlan {
    size_t n_loc = 0;
    double rp = 0;
    uint64_t n_total = 0;
    double min_frac = 0.01;
    std::vector<uint64_t> quotas;  // C(k), k = 0..n_loc
    std::vector<double> weights;   // P(k)

    uint64_t total() const;
    /// Sum of P(k) over levels with no instances; these levels contribute
    /// nothing to the estimate.
    double uncovered_mass() const;
};

/// Distinct instances with k faults over n sites: 3^k * C(n, k), saturating
/// at UINT64_MAX.
uint64_t available_instances(size_t n_loc, size_t k);

/// Assigns quotas for k = 0, 1, ... in turn. Level k asks for its share of
/// the remaining budget, P(k) / sum_{j>=k} P(j), rounded to nearest and
/// raised to ceil(min_frac * n_total) when P(k) > 0, then clipped to the
/// available instance count and the remaining budget. Budget left unused by
/// a clipped level therefore flows to higher k. The total falls below n_total
/// only when every level with P(k) > 0 is exhausted. Throws DomainError unless
/// 0 <= rp < 1 and n_total >= 1.
InstancePlan plan_instances(size_t n_loc, double rp, uint64_t n_total, double min_frac = 0.01);

/// One circuit instance: injected Paulis as (site index, letter), sorted by site.
struct Instance {
    uint32_t k = 0;
    std::vector<std::pair<uint32_t, char>> faults;
    bool operator==(const Instance &) const = default;
};

struct InstanceSet {
    std::vector<std::string> sites;
    std::vector<Instance> instances;  // grouped by k, ascending
    uint64_t shots_per_instance = 0;
};

/// For each k, C(k) distinct instances drawn uniformly without replacement.
/// Deterministic given `seed`.
InstanceSet draw_instances(
    const InstancePlan &plan, const std::vector<std::string> &sites, uint64_t shots_per_instance, uint64_t seed);

std::string plan_to_json(const InstancePlan &plan);
std::string instances_to_json(const InstanceSet &set);

/// Observable values per (instance, shot). Rejected shots carry accepted = 0.
struct ShotTable {
    size_t num_instances = 0;
    size_t shots = 0;
    std::vector<double> values;
    std::vector<uint8_t> accepted;

    ShotTable() = default;
    ShotTable(size_t instances, size_t shots_per_instance)
        : num_instances(instances),
          shots(shots_per_instance),
          values(instances * shots_per_instance, 0.0),
          accepted(instances * shots_per_instance, 1) {}
    double &value(size_t instance, size_t shot) {
        return values[instance * shots + shot];
    }
    double value(size_t instance, size_t shot) const {
        return values[instance * shots + shot];
    }
};

struct Estimate {
    double mean = 0;
    double std_error = 0;
    double uncovered_mass = 0;
    double acceptance = 1;
};

/// Weighted average over instances, sum over k of P(k)/C(k) times the
/// instance values, evaluated per shot index s. The mean is the average over
/// s and the standard error is the spread of the per-shot-index estimates.
/// When shots are rejected by post-selection a ratio of accepted sums is used.
/// Throws IncompleteDataError when the table does not match the set.
Estimate estimate_expectation(const InstanceSet &set, const InstancePlan &plan, const ShotTable &table);

/// Runs instance shots on a code circuit. Background noise (device channels
/// and any explicitly keyed injection sites such as calibration sites) is
/// drawn per shot; instance faults are applied deterministically. A "*"
/// injection entry in `background` is ignored.
class InstanceRunner {
   public:
    InstanceRunner(const Circuit &circuit, const NoiseModel &background);

    const FrameSimulator &simulator() const {
        return sim_;
    }
    /// Record flips of an instance's injected Paulis.
    BitVec instance_flips(const InstanceSet &set, const Instance &inst) const;

    /// One table per observable. Instance i draws its shots from
    /// derive_seed(seed, stream, i), so results do not depend on `threads`.
    std::vector<ShotTable> run(
        const InstanceSet &set,
        const std::vector<ObservableFn> &observables,
        uint64_t seed,
        uint64_t stream,
        unsigned threads = 1) const;

   private:
    FrameSimulator sim_;
};

}  // namespace ftzne

#endif
