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

#include "ftzne/sim.h"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "ftzne/errors.h"

namespace ftzne {

namespace {

bool has_post_selection(const Circuit &c) {
    for (const auto &op : c.ops) {
        if (std::holds_alternative<PostSelectOp>(op)) {
            return true;
        }
    }
    return false;
}

// The frame simulator when `method` allows it and it applies, else nullopt.
std::optional<FrameSimulator> try_frame(
    const Circuit &c, const NoiseModel &m, SimMethod method, uint64_t budget, bool need_exact) {
    if (method == SimMethod::StateVector) {
        return std::nullopt;
    }
    FrameSimulator fs(c, m, budget);
    bool usable = fs.valid() && (!need_exact || fs.num_records() <= 64);
    if (!usable) {
        if (method == SimMethod::Frame) {
            throw std::invalid_argument("circuit faults cannot be tracked as Pauli frames");
        }
        return std::nullopt;
    }
    return fs;
}

struct Welford {
    uint64_t n = 0;
    double mean = 0;
    double m2 = 0;
    void add(double x) {
        n++;
        double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    double std_error() const {
        if (n < 2) {
            return 0;
        }
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

// Noisy locations of `m` on `c` with their channels, in location order.
std::vector<std::pair<FaultLocation, PauliMixture>> noisy_channels(const Circuit &c, const NoiseModel &m) {
    std::vector<std::pair<FaultLocation, PauliMixture>> result;
    for (const auto &loc : fault_locations(c, LocationPolicy::AllOps)) {
        if (auto mix = m.mixture_for(loc)) {
            result.emplace_back(loc, *mix);
        }
    }
    return result;
}

void check_product_budget(const std::vector<std::pair<FaultLocation, PauliMixture>> &channels, uint64_t budget) {
    double product = 1;
    for (const auto &[loc, mix] : channels) {
        product *= static_cast<double>(mix.terms.size() + 1);
    }
    if (product > static_cast<double>(budget)) {
        throw CapacityError(
            "fault enumeration needs " + std::to_string(product) + " configurations, budget is " +
            std::to_string(budget));
    }
}

}  // namespace

double polyval(const std::vector<double> &coeffs, double x) {
    double acc = 0;
    for (size_t k = coeffs.size(); k-- > 0;) {
        acc = acc * x + coeffs[k];
    }
    return acc;
}

ObservableFn parity_observable(const ParityObservable &spec) {
    return [spec](const BitVec &records) {
        bool parity = spec.negate;
        for (uint32_t r : spec.records) {
            parity ^= records[r];
        }
        return parity ? -1.0 : 1.0;
    };
}

ShotOutcome run_shot(const Circuit &c, const NoiseModel &m, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return run_trajectory(c, {}, &m, rng);
}

RawEstimate estimate_raw(
    const Circuit &c, const NoiseModel &m, const ObservableFn &obs, uint64_t shots, uint64_t seed, SimMethod method) {
    if (shots == 0) {
        throw std::invalid_argument("estimate_raw needs at least one shot");
    }
    Welford acc;
    auto frame = try_frame(c, m, method, kDefaultBranchBudget, false);
    if (frame) {
        std::mt19937_64 rng(seed);
        for (uint64_t s = 0; s < shots; s++) {
            BitVec rec = frame->sample(rng, nullptr, true);
            if (post_selection_accepts(c, rec)) {
                acc.add(obs(rec));
            }
        }
    } else {
        for (uint64_t s = 0; s < shots; s++) {
            std::mt19937_64 rng(derive_seed(seed, 0, s));
            auto out = run_trajectory(c, {}, &m, rng);
            if (out.accepted) {
                acc.add(obs(out.bits));
            }
        }
    }
    if (acc.n == 0) {
        throw StarvationError("post-selection rejected all " + std::to_string(shots) + " shots");
    }
    return {acc.mean, acc.std_error(), static_cast<double>(acc.n) / static_cast<double>(shots), acc.n};
}

double exact_expectation(const Circuit &c, const NoiseModel &m, const ObservableFn &obs, ExactOptions options) {
    double num = 0;
    double den = 0;
    auto frame = try_frame(c, m, options.method, options.budget, true);
    if (frame) {
        for (const auto &[pattern, p] : frame->flip_distribution(true, options.budget)) {
            auto [n, d] = frame->weigh(BitVec::from_u64(frame->num_records(), pattern), obs);
            num += p * n;
            den += p * d;
        }
    } else {
        check_product_budget(noisy_channels(c, m), options.budget);
        enumerate_branches(c, {}, &m, options.budget, true, [&](const BitVec &rec, double p) {
            num += p * obs(rec);
            den += p;
        });
    }
    if (!(den > 0)) {
        throw StarvationError("post-selection accepts no branch with nonzero probability");
    }
    return num / den;
}

double ExpectationPolynomial::evaluate(double r) const {
    return polyval(coeffs, r) / polyval(normalization, r);
}

size_t ExpectationPolynomial::degree(double tol) const {
    for (size_t k = coeffs.size(); k-- > 0;) {
        if (std::abs(coeffs[k]) > tol) {
            return k;
        }
    }
    return 0;
}

ExpectationPolynomial expectation_polynomial(
    const Circuit &c, const NoiseModel &m, const ObservableFn &obs, LocationPolicy policy, ExactOptions options) {
    NoiseModel model = m;
    if (policy == LocationPolicy::InjectionOnly) {
        model.per_class.clear();
    }
    auto channels = noisy_channels(c, model);
    constexpr size_t kMaxLocations = 20;
    if (channels.size() > kMaxLocations) {
        throw CapacityError(
            "polynomial expansion supports at most " + std::to_string(kMaxLocations) + " noisy locations, got " +
            std::to_string(channels.size()));
    }
    size_t n = channels.size();
    ExpectationPolynomial result;
    result.n_locations = n;
    result.coeffs.assign(n + 1, 0.0);
    result.normalization.assign(n + 1, 0.0);

    auto frame = try_frame(c, model, options.method, options.budget, true);
    if (frame) {
        for (const auto &[pattern, poly] : frame->flip_polynomial(options.budget)) {
            auto [num, den] = frame->weigh(BitVec::from_u64(frame->num_records(), pattern), obs);
            for (size_t k = 0; k <= n; k++) {
                result.coeffs[k] += poly[k] * num;
                result.normalization[k] += poly[k] * den;
            }
        }
    } else {
        check_product_budget(channels, options.budget);
        std::vector<size_t> choice(n, 0);  // 0 = no fault, t+1 = term t
        while (true) {
            BoundFaults faults;
            // Weight polynomial: prod over faulty sites of p*r, others (1 - P*r).
            std::vector<double> weight{1.0};
            for (size_t j = 0; j < n; j++) {
                const auto &[loc, mix] = channels[j];
                double c0 = 1;
                double c1 = -mix.total_p();
                if (choice[j] > 0) {
                    const auto &term = mix.terms[choice[j] - 1];
                    faults[loc.op_index] = bind_fault(c, loc, term.pauli);
                    c0 = 0;
                    c1 = term.probability;
                }
                std::vector<double> next(weight.size() + 1, 0.0);
                for (size_t k = 0; k < weight.size(); k++) {
                    next[k] += c0 * weight[k];
                    next[k + 1] += c1 * weight[k];
                }
                weight = std::move(next);
            }
            double num = 0;
            double den = 0;
            enumerate_branches(c, faults, nullptr, options.budget, true, [&](const BitVec &rec, double p) {
                num += p * obs(rec);
                den += p;
            });
            for (size_t k = 0; k <= n; k++) {
                result.coeffs[k] += weight[k] * num;
                result.normalization[k] += weight[k] * den;
            }
            size_t j = 0;
            while (j < n && ++choice[j] > channels[j].second.terms.size()) {
                choice[j] = 0;
                j++;
            }
            if (j == n) {
                break;
            }
        }
    }
    if (!has_post_selection(c)) {
        std::fill(result.normalization.begin(), result.normalization.end(), 0.0);
        result.normalization[0] = 1;
    }
    return result;
}

}  // namespace ftzne
