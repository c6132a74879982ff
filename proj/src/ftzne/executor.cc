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

#include "ftzne/executor.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ftzne/errors.h"
#include "ftzne/state_vector.h"

namespace ftzne {

PauliTerm bind_fault(const Circuit &c, const FaultLocation &loc, const PauliTerm &local) {
    if (local.num_qubits() != loc.qubits.size()) {
        throw DimensionError(
            "fault '" + local.dense_str() + "' does not match a location on " + std::to_string(loc.qubits.size()) +
            " qubit(s)");
    }
    bool swap_xz = false;
    if (loc.noise_class == NoiseClass::Measure) {
        swap_xz = std::get<MeasureOp>(c.ops[loc.op_index]).basis == Basis::X;
    }
    PauliTerm global(c.num_qubits);
    for (size_t k = 0; k < loc.qubits.size(); k++) {
        uint32_t q = loc.qubits[k];
        bool x = local.xs[k];
        bool z = local.zs[k];
        if (swap_xz) {
            std::swap(x, z);
        }
        global.xs.set(q, global.xs[q] ^ x);
        global.zs.set(q, global.zs[q] ^ z);
    }
    return global;
}

BoundFaults bind_config(const Circuit &c, const std::vector<FaultLocation> &locs, const FaultConfig &config) {
    BoundFaults result;
    for (const auto &[index, local] : config.assignment) {
        if (index >= locs.size()) {
            throw std::out_of_range("fault assigned to unknown location " + std::to_string(index));
        }
        const auto &loc = locs[index];
        PauliTerm global = bind_fault(c, loc, local);
        auto [it, inserted] = result.emplace(loc.op_index, global);
        if (!inserted) {
            it->second = pauli_mul(it->second, global);
        }
    }
    return result;
}

bool post_selection_accepts(const Circuit &c, const BitVec &records) {
    for (const auto &op : c.ops) {
        if (const auto *ps = std::get_if<PostSelectOp>(&op)) {
            if (records[ps->record] != bool(ps->bit)) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// One micro-step of execution: an ideal op, a fixed Pauli, or a stochastic
// Pauli channel already bound to register-wide Paulis.
struct Step {
    enum class Kind { Op, Pauli, Channel } kind;
    uint32_t op = 0;
    PauliTerm pauli;
    std::vector<std::pair<PauliTerm, double>> terms;
    double none_p = 1;
};

std::vector<Step> build_steps(const Circuit &c, const BoundFaults &faults, const NoiseModel *noise) {
    std::vector<std::optional<FaultLocation>> loc_by_op(c.ops.size());
    if (noise) {
        for (const auto &loc : fault_locations(c, LocationPolicy::AllOps)) {
            loc_by_op[loc.op_index] = loc;
        }
    }
    std::vector<Step> steps;
    for (uint32_t k = 0; k < c.ops.size(); k++) {
        std::vector<Step> faults_here;
        if (auto it = faults.find(k); it != faults.end()) {
            faults_here.push_back({Step::Kind::Pauli, k, it->second, {}, 1});
        }
        if (loc_by_op[k]) {
            if (auto mix = noise->mixture_for(*loc_by_op[k])) {
                Step s{Step::Kind::Channel, k, {}, {}, 1 - mix->total_p()};
                for (const auto &t : mix->terms) {
                    s.terms.emplace_back(bind_fault(c, *loc_by_op[k], t.pauli), t.probability);
                }
                faults_here.push_back(std::move(s));
            }
        }
        bool before = std::holds_alternative<MeasureOp>(c.ops[k]);
        if (!before) {
            steps.push_back({Step::Kind::Op, k, {}, {}, 1});
        }
        for (auto &s : faults_here) {
            steps.push_back(std::move(s));
        }
        if (before) {
            steps.push_back({Step::Kind::Op, k, {}, {}, 1});
        }
    }
    return steps;
}

// Applies a deterministic op. Measurement and preparation are handled by the
// callers because they branch.
void apply_unitary_op(StateVector &sv, const Operation &op, const BitVec &records) {
    if (const auto *g = std::get_if<Gate1Op>(&op)) {
        sv.apply_gate1(g->kind, g->qubit, g->theta);
    } else if (const auto *g2 = std::get_if<Gate2Op>(&op)) {
        sv.apply_gate2(g2->kind, g2->control, g2->target);
    } else if (const auto *fb = std::get_if<FeedbackOp>(&op)) {
        if (records[fb->record] == bool(fb->bit)) {
            sv.apply_pauli(basis_char(fb->pauli), fb->qubit);
        }
    }
}

// Born probabilities (p0, p1) of reading `q` in `basis`, after rotating `sv`
// so the readout is a Z measurement.
std::pair<double, double> rotated_probs(StateVector &sv, Basis basis, uint32_t q) {
    sv.rotate_to_z(basis, q);
    auto [w0, w1] = sv.branch_weights(q);
    double norm = w0 + w1;
    if (std::abs(norm - 1) > 1e-10) {
        throw std::logic_error("branch probabilities sum to " + std::to_string(norm));
    }
    return {w0 / norm, w1 / norm};
}

void finish_measure(StateVector &sv, Basis basis, uint32_t q, bool bit, double prob) {
    sv.collapse(q, bit, prob);
    sv.rotate_from_z(basis, q);
}

void finish_prep(StateVector &sv, Basis basis, uint32_t q, bool bit, double prob) {
    sv.collapse(q, bit, prob);
    if (bit) {
        sv.apply_pauli('X', q);
    }
    sv.rotate_from_z(basis, q);
}

class BranchEnumerator {
   public:
    BranchEnumerator(
        const Circuit &c,
        std::vector<Step> steps,
        uint64_t budget,
        bool prune,
        const std::function<void(const BitVec &, double)> &leaf)
        : c_(c), steps_(std::move(steps)), budget_(budget), prune_(prune), leaf_(leaf) {
    }

    void run(size_t s, StateVector sv, BitVec rec, double w) {
        for (; s < steps_.size(); s++) {
            const Step &step = steps_[s];
            if (step.kind == Step::Kind::Pauli) {
                sv.apply_pauli(step.pauli);
                continue;
            }
            if (step.kind == Step::Kind::Channel) {
                for (const auto &[pauli, p] : step.terms) {
                    if (p <= 0) {
                        continue;
                    }
                    StateVector copy = sv;
                    copy.apply_pauli(pauli);
                    run(s + 1, std::move(copy), rec, w * p);
                }
                w *= step.none_p;
                if (w <= 0) {
                    return;
                }
                continue;
            }
            const Operation &op = c_.ops[step.op];
            if (const auto *m = std::get_if<MeasureOp>(&op)) {
                auto [p0, p1] = rotated_probs(sv, m->basis, m->qubit);
                if (p1 >= kMinBranchProbability && p0 >= kMinBranchProbability) {
                    StateVector copy = sv;
                    BitVec rec1 = rec;
                    rec1.set(m->record, true);
                    finish_measure(copy, m->basis, m->qubit, true, p1);
                    run(s + 1, std::move(copy), std::move(rec1), w * p1);
                    finish_measure(sv, m->basis, m->qubit, false, p0);
                    w *= p0;
                } else {
                    bool bit = p1 >= kMinBranchProbability;
                    rec.set(m->record, bit);
                    finish_measure(sv, m->basis, m->qubit, bit, bit ? p1 : p0);
                }
            } else if (const auto *pr = std::get_if<PrepOp>(&op)) {
                auto [p0, p1] = rotated_probs(sv, Basis::Z, pr->qubit);
                if (p1 >= kMinBranchProbability && p0 >= kMinBranchProbability) {
                    StateVector copy = sv;
                    finish_prep(copy, pr->basis, pr->qubit, true, p1);
                    run(s + 1, std::move(copy), rec, w * p1);
                    finish_prep(sv, pr->basis, pr->qubit, false, p0);
                    w *= p0;
                } else {
                    bool bit = p1 >= kMinBranchProbability;
                    finish_prep(sv, pr->basis, pr->qubit, bit, bit ? p1 : p0);
                }
            } else if (const auto *ps = std::get_if<PostSelectOp>(&op)) {
                if (prune_ && rec[ps->record] != bool(ps->bit)) {
                    return;
                }
            } else {
                apply_unitary_op(sv, op, rec);
            }
        }
        if (++leaves_ > budget_) {
            throw CapacityError(
                "exact enumeration exceeded the budget of " + std::to_string(budget_) + " branches");
        }
        leaf_(rec, w);
    }

   private:
    const Circuit &c_;
    std::vector<Step> steps_;
    uint64_t budget_;
    bool prune_;
    const std::function<void(const BitVec &, double)> &leaf_;
    uint64_t leaves_ = 0;
};

bool draw(std::mt19937_64 &rng, double p0, double p1) {
    if (p1 < kMinBranchProbability) {
        return false;
    }
    if (p0 < kMinBranchProbability) {
        return true;
    }
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p1;
}

}  // namespace

ShotOutcome run_trajectory(
    const Circuit &c, const BoundFaults &faults, const NoiseModel *noise, std::mt19937_64 &rng) {
    auto steps = build_steps(c, faults, noise);
    StateVector sv(c.num_qubits);
    ShotOutcome out{BitVec(c.records.size()), true};
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (const auto &step : steps) {
        if (step.kind == Step::Kind::Pauli) {
            sv.apply_pauli(step.pauli);
            continue;
        }
        if (step.kind == Step::Kind::Channel) {
            double u = uniform(rng);
            double acc = 0;
            for (const auto &[pauli, p] : step.terms) {
                acc += p;
                if (u < acc) {
                    sv.apply_pauli(pauli);
                    break;
                }
            }
            continue;
        }
        const Operation &op = c.ops[step.op];
        if (const auto *m = std::get_if<MeasureOp>(&op)) {
            auto [p0, p1] = rotated_probs(sv, m->basis, m->qubit);
            bool bit = draw(rng, p0, p1);
            out.bits.set(m->record, bit);
            finish_measure(sv, m->basis, m->qubit, bit, bit ? p1 : p0);
        } else if (const auto *pr = std::get_if<PrepOp>(&op)) {
            auto [p0, p1] = rotated_probs(sv, Basis::Z, pr->qubit);
            bool bit = draw(rng, p0, p1);
            finish_prep(sv, pr->basis, pr->qubit, bit, bit ? p1 : p0);
        } else if (const auto *ps = std::get_if<PostSelectOp>(&op)) {
            out.accepted = out.accepted && out.bits[ps->record] == bool(ps->bit);
        } else {
            apply_unitary_op(sv, op, out.bits);
        }
    }
    return out;
}

void enumerate_branches(
    const Circuit &c,
    const BoundFaults &faults,
    const NoiseModel *noise,
    uint64_t budget,
    bool prune_rejected,
    const std::function<void(const BitVec &records, double probability)> &leaf) {
    BranchEnumerator e(c, build_steps(c, faults, noise), budget, prune_rejected, leaf);
    e.run(0, StateVector(c.num_qubits), BitVec(c.records.size()), 1.0);
}

}  // namespace ftzne
