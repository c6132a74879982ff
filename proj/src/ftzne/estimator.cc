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

#include "ftzne/estimator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "ftzne/errors.h"
#include "json.hpp"

namespace ftzne {

namespace {

constexpr char kLetters[3] = {'X', 'Y', 'Z'};

double log_choose(size_t n, size_t k) {
    return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

// Advances `combo` (strictly increasing, values < n) to the next k-subset in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<uint32_t> &combo, size_t n) {
    size_t k = combo.size();
    for (size_t i = k; i-- > 0;) {
        if (combo[i] < n - k + i) {
            combo[i]++;
            for (size_t j = i + 1; j < k; j++) {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

std::vector<Instance> enumerate_level(size_t n, size_t k) {
    std::vector<Instance> out;
    std::vector<uint32_t> combo(k);
    for (size_t i = 0; i < k; i++) {
        combo[i] = static_cast<uint32_t>(i);
    }
    do {
        size_t patterns = 1;
        for (size_t i = 0; i < k; i++) {
            patterns *= 3;
        }
        for (size_t code = 0; code < patterns; code++) {
            Instance inst{static_cast<uint32_t>(k), {}};
            size_t c = code;
            for (size_t i = 0; i < k; i++) {
                inst.faults.emplace_back(combo[i], kLetters[c % 3]);
                c /= 3;
            }
            out.push_back(std::move(inst));
        }
    } while (k > 0 && next_combination(combo, n));
    return out;
}

Instance random_instance(size_t n, size_t k, std::mt19937_64 &rng) {
    // Floyd's algorithm for a uniform k-subset.
    std::set<uint32_t> chosen;
    for (size_t j = n - k; j < n; j++) {
        std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(j));
        uint32_t t = pick(rng);
        chosen.insert(chosen.count(t) ? static_cast<uint32_t>(j) : t);
    }
    Instance inst{static_cast<uint32_t>(k), {}};
    std::uniform_int_distribution<int> letter(0, 2);
    for (uint32_t site : chosen) {
        inst.faults.emplace_back(site, kLetters[letter(rng)]);
    }
    return inst;
}

bool instance_less(const Instance &a, const Instance &b) {
    return a.faults < b.faults;
}

}  // namespace

uint64_t InstancePlan::total() const {
    uint64_t t = 0;
    for (uint64_t q : quotas) {
        t += q;
    }
    return t;
}

double InstancePlan::uncovered_mass() const {
    double mass = 0;
    for (size_t k = 0; k < quotas.size(); k++) {
        if (quotas[k] == 0) {
            mass += weights[k];
        }
    }
    return mass;
}

uint64_t available_instances(size_t n_loc, size_t k) {
    if (k > n_loc) {
        return 0;
    }
    double log_count = log_choose(n_loc, k) + double(k) * std::log(3.0);
    if (log_count > 63 * std::log(2.0)) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(std::llround(std::exp(log_count)));
}

InstancePlan plan_instances(size_t n_loc, double rp, uint64_t n_total, double min_frac) {
    if (!(rp >= 0 && rp < 1)) {
        throw DomainError("per-location error probability must lie in [0, 1)");
    }
    if (n_total < 1) {
        throw DomainError("instance budget must be at least 1");
    }
    if (!(min_frac >= 0 && min_frac <= 1)) {
        throw DomainError("minimum instance fraction must lie in [0, 1]");
    }
    InstancePlan plan{n_loc, rp, n_total, min_frac, std::vector<uint64_t>(n_loc + 1, 0), {}};
    for (size_t k = 0; k <= n_loc; k++) {
        double p;
        if (rp == 0) {
            p = k == 0 ? 1.0 : 0.0;
        } else {
            p = std::exp(log_choose(n_loc, k) + double(k) * std::log(rp) + double(n_loc - k) * std::log1p(-rp));
        }
        plan.weights.push_back(p);
    }
    std::vector<double> tail(n_loc + 2, 0.0);
    for (size_t k = n_loc + 1; k-- > 0;) {
        tail[k] = tail[k + 1] + plan.weights[k];
    }
    uint64_t floor_count = static_cast<uint64_t>(std::ceil(min_frac * double(n_total) - 1e-9));
    uint64_t remaining = n_total;
    for (size_t k = 0; k <= n_loc && remaining > 0; k++) {
        if (!(plan.weights[k] > 0)) {
            continue;
        }
        // Share of the remaining budget in proportion to this level's weight
        // among the levels not yet assigned.
        double share = plan.weights[k] / tail[k] * double(remaining);
        uint64_t want = std::max<uint64_t>(static_cast<uint64_t>(std::llround(share)), floor_count);
        uint64_t take = std::min({want, available_instances(n_loc, k), remaining});
        plan.quotas[k] = take;
        remaining -= take;
    }
    return plan;
}

InstanceSet draw_instances(
    const InstancePlan &plan, const std::vector<std::string> &sites, uint64_t shots_per_instance, uint64_t seed) {
    if (sites.size() != plan.n_loc) {
        throw std::invalid_argument("plan and site list disagree on the number of locations");
    }
    InstanceSet set{sites, {}, shots_per_instance};
    size_t n = plan.n_loc;
    for (size_t k = 0; k <= n; k++) {
        uint64_t quota = plan.quotas[k];
        if (quota == 0) {
            continue;
        }
        uint64_t avail = available_instances(n, k);
        std::mt19937_64 rng(derive_seed(seed, 1, k));
        std::vector<Instance> level;
        if (avail <= 4 * quota && avail <= (uint64_t{1} << 22)) {
            level = enumerate_level(n, k);
            for (size_t i = 0; i < quota; i++) {
                std::uniform_int_distribution<size_t> pick(i, level.size() - 1);
                std::swap(level[i], level[pick(rng)]);
            }
            level.resize(quota);
        } else {
            std::set<std::vector<std::pair<uint32_t, char>>> seen;
            while (level.size() < quota) {
                Instance inst = random_instance(n, k, rng);
                if (seen.insert(inst.faults).second) {
                    level.push_back(std::move(inst));
                }
            }
        }
        std::sort(level.begin(), level.end(), instance_less);
        set.instances.insert(set.instances.end(), level.begin(), level.end());
    }
    return set;
}

std::string plan_to_json(const InstancePlan &plan) {
    nlohmann::json j;
    j["n_loc"] = plan.n_loc;
    j["rp"] = plan.rp;
    j["n_total"] = plan.n_total;
    j["min_frac"] = plan.min_frac;
    j["quotas"] = plan.quotas;
    j["weights"] = plan.weights;
    j["uncovered_mass"] = plan.uncovered_mass();
    return j.dump(2);
}

std::string instances_to_json(const InstanceSet &set) {
    nlohmann::json j;
    j["shots_per_instance"] = set.shots_per_instance;
    auto arr = nlohmann::json::array();
    for (const auto &inst : set.instances) {
        nlohmann::json e;
        e["k"] = inst.k;
        auto faults = nlohmann::json::array();
        for (const auto &[site, letter] : inst.faults) {
            faults.push_back({{"site", set.sites[site]}, {"pauli", std::string(1, letter)}});
        }
        e["faults"] = faults;
        arr.push_back(e);
    }
    j["instances"] = arr;
    return j.dump(2);
}

Estimate estimate_expectation(const InstanceSet &set, const InstancePlan &plan, const ShotTable &table) {
    size_t n_inst = set.instances.size();
    size_t S = set.shots_per_instance;
    if (table.num_instances != n_inst || table.shots != S || table.values.size() != n_inst * S ||
        table.accepted.size() != n_inst * S) {
        throw IncompleteDataError(
            "shot table has " + std::to_string(table.values.size()) + " entries, expected " +
            std::to_string(n_inst * S));
    }
    if (S == 0) {
        throw IncompleteDataError("no shots per instance");
    }
    std::vector<double> weight(n_inst);
    for (size_t i = 0; i < n_inst; i++) {
        uint32_t k = set.instances[i].k;
        if (k >= plan.quotas.size() || plan.quotas[k] == 0) {
            throw std::invalid_argument("instance level is not part of the plan");
        }
        weight[i] = plan.weights[k] / double(plan.quotas[k]);
    }
    std::vector<double> num(S, 0.0);
    std::vector<double> den(S, 0.0);
    uint64_t accepted = 0;
    for (size_t i = 0; i < n_inst; i++) {
        for (size_t s = 0; s < S; s++) {
            if (table.accepted[i * S + s]) {
                num[s] += weight[i] * table.value(i, s);
                den[s] += weight[i];
                accepted++;
            }
        }
    }
    Estimate est;
    est.uncovered_mass = plan.uncovered_mass();
    est.acceptance = double(accepted) / double(n_inst * S);
    bool all_accepted = accepted == n_inst * S;
    if (all_accepted) {
        double mean = 0;
        for (double v : num) {
            mean += v;
        }
        mean /= double(S);
        double ss = 0;
        for (double v : num) {
            ss += (v - mean) * (v - mean);
        }
        est.mean = mean;
        est.std_error = S > 1 ? std::sqrt(ss / (double(S) * double(S - 1))) : 0.0;
        return est;
    }
    double total_num = 0;
    double total_den = 0;
    for (size_t s = 0; s < S; s++) {
        total_num += num[s];
        total_den += den[s];
    }
    if (!(total_den > 0)) {
        throw StarvationError("post-selection rejected every instance shot");
    }
    double mean = total_num / total_den;
    double mean_den = total_den / double(S);
    double ss = 0;
    for (size_t s = 0; s < S; s++) {
        double z = (num[s] - mean * den[s]) / mean_den;
        ss += z * z;
    }
    est.mean = mean;
    est.std_error = S > 1 ? std::sqrt(ss / (double(S) * double(S - 1))) : 0.0;
    return est;
}

namespace {

NoiseModel without_wildcard(NoiseModel m) {
    m.injection.erase("*");
    return m;
}

}  // namespace

InstanceRunner::InstanceRunner(const Circuit &circuit, const NoiseModel &background)
    : sim_(circuit, without_wildcard(background), kDefaultBranchBudget) {
    if (!sim_.valid()) {
        throw std::invalid_argument("background noise meets a non-Clifford rotation");
    }
}

BitVec InstanceRunner::instance_flips(const InstanceSet &set, const Instance &inst) const {
    BitVec flips(sim_.num_records());
    const auto &locs = sim_.locations();
    for (const auto &[site, letter] : inst.faults) {
        const std::string &name = set.sites.at(site);
        auto it = std::find_if(locs.begin(), locs.end(), [&](const FaultLocation &l) {
            return l.noise_class == NoiseClass::Inject && l.site == name;
        });
        if (it == locs.end()) {
            throw std::invalid_argument("injection site '" + name + "' is not in the circuit");
        }
        auto f = sim_.flips(static_cast<uint32_t>(it - locs.begin()), PauliTerm::from_dense(std::string(1, letter)));
        if (!f) {
            throw std::logic_error("injected fault at '" + name + "' meets a non-Clifford rotation");
        }
        flips ^= *f;
    }
    return flips;
}

std::vector<ShotTable> InstanceRunner::run(
    const InstanceSet &set,
    const std::vector<ObservableFn> &observables,
    uint64_t seed,
    uint64_t stream,
    unsigned threads) const {
    size_t n_inst = set.instances.size();
    size_t S = set.shots_per_instance;
    std::vector<ShotTable> tables(observables.size(), ShotTable(n_inst, S));
    const Circuit &c = sim_.circuit();
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < n_inst; i = next++) {
            BitVec extra = instance_flips(set, set.instances[i]);
            std::mt19937_64 rng(derive_seed(seed, stream, i));
            for (size_t s = 0; s < S; s++) {
                BitVec rec = sim_.sample(rng, &extra, true);
                bool ok = post_selection_accepts(c, rec);
                for (size_t o = 0; o < observables.size(); o++) {
                    tables[o].accepted[i * S + s] = ok;
                    tables[o].values[i * S + s] = ok ? observables[o](rec) : 0.0;
                }
            }
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return tables;
}

}  // namespace ftzne
