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

#include "ftzne/noise.h"

#include <cmath>
#include <random>

#include "ftzne/errors.h"
#include "json.hpp"

namespace ftzne {

double PauliMixture::total_p() const {
    double total = 0;
    for (const auto &t : terms) {
        total += t.probability;
    }
    return total;
}

void PauliMixture::validate() const {
    double total = 0;
    for (const auto &t : terms) {
        if (!(t.probability >= 0 && t.probability <= 1)) {
            throw DomainError("mixture probability outside [0,1]: " + std::to_string(t.probability));
        }
        if (t.pauli.is_identity() || weight(t.pauli) == 0) {
            throw DomainError("identity listed as an error term");
        }
        if (t.pauli.num_qubits() != arity()) {
            throw DomainError("mixture terms have different arities");
        }
        total += t.probability;
    }
    if (total > 1 + 1e-12) {
        throw DomainError("mixture total probability exceeds 1: " + std::to_string(total));
    }
}

PauliMixture PauliMixture::depolarizing(size_t arity, double total_p) {
    if (!(total_p >= 0 && total_p <= 1)) {
        throw DomainError("depolarizing probability outside [0,1]");
    }
    PauliMixture m;
    if (total_p == 0) {
        return m;
    }
    size_t count = (size_t{1} << (2 * arity)) - 1;
    static const char kLetters[] = "IXYZ";
    for (size_t code = 1; code <= count; code++) {
        PauliTerm p(arity);
        for (size_t q = 0; q < arity; q++) {
            p.set_letter(q, kLetters[(code >> (2 * q)) & 3]);
        }
        m.terms.push_back({p, total_p / static_cast<double>(count)});
    }
    return m;
}

PauliMixture PauliMixture::bit_flip(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError("bit-flip probability outside [0,1]");
    }
    PauliMixture m;
    if (p > 0) {
        m.terms.push_back({PauliTerm::from_dense("X"), p});
    }
    return m;
}

PauliMixture standard_injection(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError("injection probability outside [0,1]: " + std::to_string(p));
    }
    PauliMixture m;
    if (p == 0) {
        return m;
    }
    for (char c : {'X', 'Y', 'Z'}) {
        m.terms.push_back({PauliTerm::from_dense(std::string(1, c)), p / 3});
    }
    return m;
}

std::optional<PauliMixture> NoiseModel::mixture_for(const FaultLocation &loc) const {
    const PauliMixture *base = nullptr;
    if (loc.noise_class == NoiseClass::Inject) {
        auto it = injection.find(loc.site);
        if (it == injection.end()) {
            it = injection.find("*");
        }
        if (it != injection.end()) {
            base = &it->second;
        }
    } else if (auto it = per_class.find(loc.noise_class); it != per_class.end()) {
        base = &it->second;
    }
    if (!base || base->empty()) {
        return std::nullopt;
    }
    PauliMixture result = *base;
    for (auto &t : result.terms) {
        t.probability *= r;
    }
    return result;
}

bool NoiseModel::is_ideal() const {
    for (const auto &[k, m] : per_class) {
        if (!m.empty()) {
            return false;
        }
    }
    for (const auto &[k, m] : injection) {
        if (!m.empty()) {
            return false;
        }
    }
    return true;
}

NoiseModel scale_model(const NoiseModel &m, double r) {
    if (!(r > 0) || !std::isfinite(r)) {
        throw DomainError("noise scale factor must be positive, got " + std::to_string(r));
    }
    NoiseModel result = m;
    result.r = m.r * r;
    auto check = [&](const PauliMixture &mix, const std::string &what) {
        if (result.r * mix.total_p() > 1 + 1e-12) {
            throw DomainError(
                "scaling overflow: r=" + std::to_string(result.r) + " times total_p=" + std::to_string(mix.total_p()) +
                " for " + what + " exceeds 1");
        }
    };
    for (const auto &[k, mix] : result.per_class) {
        check(mix, noise_class_name(k));
    }
    for (const auto &[site, mix] : result.injection) {
        check(mix, "site " + site);
    }
    return result;
}

NoiseModel device_preset(const std::string &name, std::optional<double> readout_override) {
    NoiseModel m;
    double e1, e2, readout;
    if (name == "processor1") {
        e1 = 0.00085;
        e2 = 0.0056;
        readout = 0.0047;
    } else if (name == "processor2") {
        e1 = 0.00055;
        e2 = 0.0037;
        readout = 0.0087;
    } else if (name == "ideal") {
        return m;
    } else {
        throw std::invalid_argument("unknown noise preset '" + name + "'");
    }
    if (readout_override) {
        readout = *readout_override;
    }
    m.per_class[NoiseClass::Gate1] = PauliMixture::depolarizing(1, e1);
    m.per_class[NoiseClass::Gate2] = PauliMixture::depolarizing(2, e2);
    m.per_class[NoiseClass::Measure] = PauliMixture::bit_flip(readout);
    return m;
}

std::string noise_class_name(NoiseClass c) {
    switch (c) {
        case NoiseClass::Prep:
            return "prep";
        case NoiseClass::Gate1:
            return "gate1";
        case NoiseClass::Gate2:
            return "gate2";
        case NoiseClass::Measure:
            return "measure";
        case NoiseClass::Inject:
            return "inject";
    }
    return "?";
}

NoiseClass noise_class_from_name(const std::string &name) {
    for (NoiseClass c : {NoiseClass::Prep, NoiseClass::Gate1, NoiseClass::Gate2, NoiseClass::Measure}) {
        if (noise_class_name(c) == name) {
            return c;
        }
    }
    throw std::invalid_argument("unknown operation kind '" + name + "'");
}

namespace {

nlohmann::json mixture_to_json(const PauliMixture &m) {
    auto arr = nlohmann::json::array();
    for (const auto &t : m.terms) {
        arr.push_back({{"pauli", t.pauli.dense_str()}, {"p", t.probability}});
    }
    return arr;
}

PauliMixture mixture_from_json(const nlohmann::json &j) {
    PauliMixture m;
    for (const auto &t : j) {
        m.terms.push_back({PauliTerm::from_dense(t.at("pauli").get<std::string>()), t.at("p").get<double>()});
    }
    m.validate();
    return m;
}

}  // namespace

std::string noise_model_to_json(const NoiseModel &m) {
    nlohmann::json j;
    j["opkinds"] = nlohmann::json::object();
    for (const auto &[k, mix] : m.per_class) {
        j["opkinds"][noise_class_name(k)] = mixture_to_json(mix);
    }
    j["injection"] = nlohmann::json::object();
    for (const auto &[site, mix] : m.injection) {
        j["injection"][site] = mixture_to_json(mix);
    }
    j["r"] = m.r;
    return j.dump(2);
}

NoiseModel noise_model_from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    NoiseModel m;
    if (j.contains("opkinds")) {
        for (const auto &[k, v] : j.at("opkinds").items()) {
            m.per_class[noise_class_from_name(k)] = mixture_from_json(v);
        }
    }
    if (j.contains("injection")) {
        for (const auto &[site, v] : j.at("injection").items()) {
            m.injection[site] = mixture_from_json(v);
        }
    }
    m.r = j.value("r", 1.0);
    for (const auto &[k, mix] : m.per_class) {
        if (m.r * mix.total_p() > 1 + 1e-12) {
            throw DomainError("scaled mixture for " + noise_class_name(k) + " exceeds probability 1");
        }
    }
    return m;
}

FaultConfig sample_fault_config(const Circuit &c, const NoiseModel &m, LocationPolicy policy, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    FaultConfig config;
    auto locations = fault_locations(c, policy);
    for (size_t k = 0; k < locations.size(); k++) {
        auto mix = m.mixture_for(locations[k]);
        if (!mix) {
            continue;
        }
        double u = uniform(rng);
        double total = mix->total_p();
        if (u >= total) {
            continue;
        }
        // Conditional draw: u is uniform on [0, total) given an error occurred.
        double acc = 0;
        const PauliTerm *chosen = &mix->terms.back().pauli;
        for (const auto &t : mix->terms) {
            acc += t.probability;
            if (u < acc) {
                chosen = &t.pauli;
                break;
            }
        }
        config.assignment.emplace(static_cast<uint32_t>(k), *chosen);
    }
    return config;
}

uint64_t derive_seed(uint64_t experiment_seed, uint64_t a, uint64_t b) {
    auto mix = [](uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(experiment_seed) ^ a) ^ (b * 0xD6E8FEB86659FD93ULL));
}

}  // namespace ftzne
