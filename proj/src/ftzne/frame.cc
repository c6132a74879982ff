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

#include "ftzne/frame.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ftzne/errors.h"

namespace ftzne {

namespace {

void toggle(PauliTerm &frame, Basis letter, uint32_t q) {
    if (letter != Basis::Z) {
        frame.xs.flip(q);
    }
    if (letter != Basis::X) {
        frame.zs.flip(q);
    }
}

uint64_t pattern_key(const BitVec &flips) {
    return flips.size() == 0 ? 0 : flips.as_u64();
}

void require_small_record(size_t num_records) {
    if (num_records > 64) {
        throw CapacityError(
            "exact frame enumeration supports at most 64 records, circuit has " + std::to_string(num_records));
    }
}

}  // namespace

std::optional<BitVec> propagate_frame(const Circuit &c, uint32_t start, PauliTerm frame) {
    BitVec flips(c.records.size());
    for (size_t k = start; k < c.ops.size(); k++) {
        if (!frame.xs.any() && !frame.zs.any()) {
            break;
        }
        const Operation &op = c.ops[k];
        if (const auto *p = std::get_if<PrepOp>(&op)) {
            frame.xs.set(p->qubit, false);
            frame.zs.set(p->qubit, false);
        } else if (const auto *g = std::get_if<Gate1Op>(&op)) {
            uint32_t q = g->qubit;
            bool x = frame.xs[q];
            bool z = frame.zs[q];
            switch (g->kind) {
                case GateKind::H:
                    frame.xs.set(q, z);
                    frame.zs.set(q, x);
                    break;
                case GateKind::S:
                    frame.zs.set(q, z ^ x);
                    break;
                case GateKind::RZ:
                    if (x) {
                        return std::nullopt;
                    }
                    break;
                case GateKind::RY:
                    if (x != z) {
                        return std::nullopt;
                    }
                    break;
                default:
                    break;
            }
        } else if (const auto *g2 = std::get_if<Gate2Op>(&op)) {
            uint32_t a = g2->control;
            uint32_t b = g2->target;
            if (g2->kind == GateKind::CNOT) {
                frame.xs.set(b, frame.xs[b] ^ frame.xs[a]);
                frame.zs.set(a, frame.zs[a] ^ frame.zs[b]);
            } else {
                bool xa = frame.xs[a];
                bool xb = frame.xs[b];
                frame.zs.set(a, frame.zs[a] ^ xb);
                frame.zs.set(b, frame.zs[b] ^ xa);
            }
        } else if (const auto *m = std::get_if<MeasureOp>(&op)) {
            bool x = frame.xs[m->qubit];
            bool z = frame.zs[m->qubit];
            bool anticommutes = m->basis == Basis::Z ? x : m->basis == Basis::X ? z : (x != z);
            if (anticommutes) {
                flips.set(m->record, true);
            }
        } else if (const auto *fb = std::get_if<FeedbackOp>(&op)) {
            // The correction fires in exactly one of the faulty and reference
            // runs when the conditioning record is flipped.
            if (flips[fb->record]) {
                toggle(frame, fb->pauli, fb->qubit);
            }
        }
    }
    return flips;
}

FrameSimulator::FrameSimulator(const Circuit &c, const NoiseModel &m, uint64_t budget)
    : circuit_(c), locations_(fault_locations(c, LocationPolicy::AllOps)) {
    generators_.resize(locations_.size());
    for (size_t l = 0; l < locations_.size(); l++) {
        const auto &loc = locations_[l];
        uint32_t start = loc.before_op() ? loc.op_index : loc.op_index + 1;
        for (uint32_t q : loc.qubits) {
            for (char letter : {'X', 'Z'}) {
                generators_[l].push_back(
                    propagate_frame(circuit_, start, PauliTerm::single(c.num_qubits, q, letter)));
            }
        }
    }

    for (size_t l = 0; l < locations_.size(); l++) {
        auto mix = m.mixture_for(locations_[l]);
        if (!mix) {
            continue;
        }
        NoisyLocation nl{
            static_cast<uint32_t>(l), locations_[l].noise_class == NoiseClass::Inject, mix->total_p(), {}};
        for (const auto &t : mix->terms) {
            auto f = flips(static_cast<uint32_t>(l), t.pauli);
            if (!f) {
                valid_ = false;
                f = BitVec(num_records());
            }
            nl.terms.push_back({*f, t.probability});
        }
        noisy_.push_back(std::move(nl));
    }

    std::map<BitVec, double> merged;
    enumerate_branches(c, {}, nullptr, budget, false, [&](const BitVec &rec, double p) {
        merged[rec] += p;
    });
    double total = 0;
    for (const auto &[rec, p] : merged) {
        reference_.emplace_back(rec, p);
        total += p;
        reference_cdf_.push_back(total);
    }
    for (auto &v : reference_cdf_) {
        v /= total;
    }
}

std::optional<BitVec> FrameSimulator::flips(uint32_t location, const PauliTerm &local) const {
    const auto &loc = locations_.at(location);
    PauliTerm global = bind_fault(circuit_, loc, local);
    BitVec result(num_records());
    for (size_t k = 0; k < loc.qubits.size(); k++) {
        uint32_t q = loc.qubits[k];
        for (int part = 0; part < 2; part++) {
            bool present = part == 0 ? global.xs[q] : global.zs[q];
            if (!present) {
                continue;
            }
            const auto &g = generators_[location][2 * k + part];
            if (!g) {
                return std::nullopt;
            }
            result ^= *g;
        }
    }
    return result;
}

BitVec FrameSimulator::config_flips(const std::vector<FaultLocation> &locs, const FaultConfig &config) const {
    BitVec result(num_records());
    for (const auto &[index, local] : config.assignment) {
        const auto &loc = locs.at(index);
        auto it = std::find_if(locations_.begin(), locations_.end(), [&](const FaultLocation &l) {
            return l.op_index == loc.op_index;
        });
        if (it == locations_.end()) {
            throw std::out_of_range("fault location is not part of the circuit");
        }
        auto f = flips(static_cast<uint32_t>(it - locations_.begin()), local);
        if (!f) {
            throw std::logic_error("fault at op " + std::to_string(loc.op_index) + " meets a non-Clifford rotation");
        }
        result ^= *f;
    }
    return result;
}

BitVec FrameSimulator::sample(std::mt19937_64 &rng, const BitVec *extra, bool sample_injection) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    size_t ref = std::upper_bound(reference_cdf_.begin(), reference_cdf_.end(), uniform(rng)) - reference_cdf_.begin();
    ref = std::min(ref, reference_.size() - 1);
    BitVec rec = reference_[ref].first;
    for (const auto &nl : noisy_) {
        if (nl.injection && !sample_injection) {
            continue;
        }
        double u = uniform(rng);
        if (u >= nl.total_p) {
            continue;
        }
        double acc = 0;
        const Term *chosen = &nl.terms.back();
        for (const auto &t : nl.terms) {
            acc += t.probability;
            if (u < acc) {
                chosen = &t;
                break;
            }
        }
        rec ^= chosen->flips;
    }
    if (extra) {
        rec ^= *extra;
    }
    return rec;
}

std::unordered_map<uint64_t, double> FrameSimulator::flip_distribution(bool include_injection, uint64_t budget) const {
    require_small_record(num_records());
    std::unordered_map<uint64_t, double> dist{{0, 1.0}};
    for (const auto &nl : noisy_) {
        if (nl.injection && !include_injection) {
            continue;
        }
        std::map<uint64_t, double> moves;
        moves[0] += 1 - nl.total_p;
        for (const auto &t : nl.terms) {
            moves[pattern_key(t.flips)] += t.probability;
        }
        std::unordered_map<uint64_t, double> next;
        next.reserve(dist.size() * moves.size());
        for (const auto &[pattern, p] : dist) {
            for (const auto &[move, q] : moves) {
                next[pattern ^ move] += p * q;
            }
        }
        if (next.size() > budget) {
            throw CapacityError("flip distribution exceeded the budget of " + std::to_string(budget) + " patterns");
        }
        dist = std::move(next);
    }
    return dist;
}

std::unordered_map<uint64_t, std::vector<double>> FrameSimulator::flip_polynomial(uint64_t budget) const {
    require_small_record(num_records());
    size_t degree = noisy_.size();
    std::unordered_map<uint64_t, std::vector<double>> dist;
    dist[0] = std::vector<double>(degree + 1, 0.0);
    dist[0][0] = 1;
    size_t used = 0;
    for (const auto &nl : noisy_) {
        // Each move is c0 + c1 * r.
        std::map<uint64_t, std::pair<double, double>> moves;
        moves[0] = {1, -nl.total_p};
        for (const auto &t : nl.terms) {
            moves[pattern_key(t.flips)].second += t.probability;
        }
        std::unordered_map<uint64_t, std::vector<double>> next;
        for (const auto &[pattern, poly] : dist) {
            for (const auto &[move, c] : moves) {
                auto &out = next[pattern ^ move];
                if (out.empty()) {
                    out.assign(degree + 1, 0.0);
                }
                for (size_t k = 0; k <= used; k++) {
                    out[k] += c.first * poly[k];
                    out[k + 1] += c.second * poly[k];
                }
            }
        }
        if (next.size() > budget) {
            throw CapacityError("flip polynomial exceeded the budget of " + std::to_string(budget) + " patterns");
        }
        dist = std::move(next);
        used++;
    }
    return dist;
}

std::pair<double, double> FrameSimulator::weigh(const BitVec &flips, const ObservableFn &obs) const {
    double num = 0;
    double den = 0;
    for (const auto &[ref, p] : reference_) {
        BitVec rec = ref ^ flips;
        if (!post_selection_accepts(circuit_, rec)) {
            continue;
        }
        num += p * obs(rec);
        den += p;
    }
    return {num, den};
}

}  // namespace ftzne
