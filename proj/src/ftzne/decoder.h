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

#ifndef FTZNE_DECODER_H
#define FTZNE_DECODER_H

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ftzne/codes.h"
#include "ftzne/frame.h"
#include "ftzne/noise.h"

namespace ftzne {

/// Virtual node absorbing defects at the code boundary.
constexpr uint32_t kBoundary = std::numeric_limits<uint32_t>::max();

struct DetectorGraph {
    struct Edge {
        uint32_t a;
        uint32_t b;  // kBoundary for boundary edges
        double probability;
        double weight;  // -ln(probability)
        bool flip;      // the mechanism flips the logical parity
        bool operator==(const Edge &) const = default;
    };
    uint32_t num_nodes = 0;
    std::vector<Edge> edges;

    bool operator==(const DetectorGraph &) const = default;
};

/// Adds a mechanism of probability p, merging it into an existing parallel
/// edge with p1(1-p2) + p2(1-p1). On a merge the logical flip of the more
/// likely mechanism is kept.
void add_mechanism(DetectorGraph &g, uint32_t a, uint32_t b, double p, bool flip);

/// Detectors fired by a record flip mask.
std::vector<uint32_t> fired_detectors(const BuiltCode &code, const BitVec &flips);
/// Detectors whose parity in `records` differs from the expected value.
std::vector<uint32_t> syndrome_of(const BuiltCode &code, const BitVec &records);
/// Parity of the logical records in `bits`.
bool logical_parity(const BuiltCode &code, const BitVec &bits);

/// One edge per single-fault mechanism of `m` on the code circuit. A fault
/// firing more than two detectors is split into its single-qubit X and Z
/// components; if a component still fires more than two, HyperedgeError is
/// thrown.
DetectorGraph build_detector_graph(const BuiltCode &code, const NoiseModel &m);

/// `NODE <id>` / `EDGE <a> <b|BOUNDARY> w=<float> flip=<0|1>` lines.
std::string detector_graph_text(const DetectorGraph &g);
DetectorGraph parse_detector_graph(const std::string &text);

/// Exact minimum-weight perfect matching over fired detectors and the
/// boundary, by memoised recursion over defect subsets. Ties are broken by
/// the lexicographically smallest pairing.
class MatchingDecoder {
   public:
    static constexpr size_t kMaxDefects = 16;

    explicit MatchingDecoder(DetectorGraph g, size_t max_defects = kMaxDefects);

    const DetectorGraph &graph() const {
        return graph_;
    }
    /// Logical flip of the optimal matching. Throws CapacityError above the
    /// defect cap and std::runtime_error when no matching exists.
    bool decode(const std::vector<uint32_t> &fired) const;
    /// Total weight of the optimal matching.
    double matching_weight(const std::vector<uint32_t> &fired) const;

    /// Shortest-path weight and flip parity between nodes (kBoundary allowed).
    double distance(uint32_t a, uint32_t b) const;
    bool path_flip(uint32_t a, uint32_t b) const;

   private:
    size_t index(uint32_t node) const {
        return node == kBoundary ? graph_.num_nodes : node;
    }
    std::pair<double, bool> solve(const std::vector<uint32_t> &fired) const;

    DetectorGraph graph_;
    size_t max_defects_;
    size_t n_;  // num_nodes + 1
    std::vector<double> dist_;
    std::vector<uint8_t> flip_;
};

/// Syndrome table for small codes: every syndrome produced by at most
/// `max_faults` graph mechanisms, mapped to the logical flip of its
/// minimum-weight explanation. Lookups miss fall back to `fallback`.
class LookupDecoder {
   public:
    LookupDecoder(std::shared_ptr<const MatchingDecoder> fallback, size_t max_faults = 2);

    bool decode(const std::vector<uint32_t> &fired) const;
    /// Table entry for a syndrome, if present.
    std::optional<bool> lookup(const std::vector<uint32_t> &fired) const;
    size_t size() const {
        return table_.size();
    }

   private:
    std::shared_ptr<const MatchingDecoder> fallback_;
    std::unordered_map<uint64_t, std::pair<double, bool>> table_;
};

/// (-1)^(logical parity XOR decoder flip) for each shot record.
ObservableFn decoded_observable(const BuiltCode &code, std::shared_ptr<const MatchingDecoder> decoder);
/// Mean of (-1)^(group parity) over the code's raw groups.
ObservableFn raw_observable(const BuiltCode &code);

struct DistanceReport {
    uint32_t max_weight = 0;
    uint64_t patterns_checked = 0;
    uint64_t failures = 0;
    /// Smallest weight with a failing pattern, if any.
    std::optional<uint32_t> min_failing_weight;
    std::string first_failure;

    bool passed() const {
        return failures == 0;
    }
};

/// Checks every fault pattern of weight <= t over the noisy locations of `m`
/// (each location taking any of its Pauli terms): the decoder must undo the
/// logical flip the pattern causes.
DistanceReport verify_distance(const BuiltCode &code, const NoiseModel &m, uint32_t t);

}  // namespace ftzne

#endif
