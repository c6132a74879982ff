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

#include "ftzne/decoder.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ftzne/errors.h"

namespace ftzne {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double candidate, double best) {
    if (std::isinf(best)) {
        return candidate < best;
    }
    return candidate < best - 1e-9 * (1 + std::abs(best));
}

uint64_t syndrome_key(const std::vector<uint32_t> &fired) {
    uint64_t key = 0;
    for (uint32_t d : fired) {
        if (d >= 64) {
            throw CapacityError("lookup decoding supports at most 64 detectors");
        }
        key ^= uint64_t{1} << d;
    }
    return key;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void add_mechanism(DetectorGraph &g, uint32_t a, uint32_t b, double p, bool flip) {
    if (!(p > 0)) {
        return;
    }
    if (b != kBoundary && b < a) {
        std::swap(a, b);
    }
    for (auto &e : g.edges) {
        if (e.a == a && e.b == b) {
            if (p > e.probability) {
                e.flip = flip;
            }
            e.probability = e.probability * (1 - p) + p * (1 - e.probability);
            e.weight = -std::log(e.probability);
            return;
        }
    }
    g.edges.push_back({a, b, p, -std::log(p), flip});
}

std::vector<uint32_t> fired_detectors(const BuiltCode &code, const BitVec &flips) {
    std::vector<uint32_t> fired;
    for (uint32_t i = 0; i < code.detectors.size(); i++) {
        bool parity = false;
        for (uint32_t r : code.detectors[i].records) {
            parity ^= flips[r];
        }
        if (parity) {
            fired.push_back(i);
        }
    }
    return fired;
}

std::vector<uint32_t> syndrome_of(const BuiltCode &code, const BitVec &records) {
    std::vector<uint32_t> fired;
    for (uint32_t i = 0; i < code.detectors.size(); i++) {
        bool parity = code.detectors[i].expected;
        for (uint32_t r : code.detectors[i].records) {
            parity ^= records[r];
        }
        if (parity) {
            fired.push_back(i);
        }
    }
    return fired;
}

bool logical_parity(const BuiltCode &code, const BitVec &bits) {
    bool parity = false;
    for (uint32_t r : code.logical.records) {
        parity ^= bits[r];
    }
    return parity;
}

DetectorGraph build_detector_graph(const BuiltCode &code, const NoiseModel &m) {
    FrameSimulator fs(code.circuit, m, kDefaultBranchBudget);
    DetectorGraph g;
    g.num_nodes = static_cast<uint32_t>(code.detectors.size());
    auto add = [&](const std::vector<uint32_t> &fired, double p, bool flip) {
        if (fired.empty()) {
            return;
        }
        g.num_nodes = std::max<uint32_t>(g.num_nodes, fired.back() + 1);
        add_mechanism(g, fired[0], fired.size() == 2 ? fired[1] : kBoundary, p, flip);
    };
    for (const auto &nl : fs.noisy_locations()) {
        const auto &loc = fs.locations()[nl.location];
        auto mix = m.mixture_for(loc);
        for (size_t t = 0; t < nl.terms.size(); t++) {
            double p = nl.terms[t].probability;
            auto fired = fired_detectors(code, nl.terms[t].flips);
            if (fired.size() <= 2) {
                add(fired, p, logical_parity(code, nl.terms[t].flips));
                continue;
            }
            const PauliTerm &local = mix->terms[t].pauli;
            for (size_t k = 0; k < local.num_qubits(); k++) {
                char letter = local.letter(k);
                for (char part : {'X', 'Z'}) {
                    bool present = part == 'X' ? (letter == 'X' || letter == 'Y') : (letter == 'Z' || letter == 'Y');
                    if (!present) {
                        continue;
                    }
                    auto f = fs.flips(nl.location, PauliTerm::single(local.num_qubits(), k, part));
                    if (!f) {
                        throw std::logic_error("fault component cannot be propagated as a Pauli frame");
                    }
                    auto sub = fired_detectors(code, *f);
                    if (sub.size() > 2) {
                        throw HyperedgeError(
                            "fault at op " + std::to_string(loc.op_index) + " fires " + std::to_string(sub.size()) +
                            " detectors");
                    }
                    add(sub, p, logical_parity(code, *f));
                }
            }
        }
    }
    return g;
}

std::string detector_graph_text(const DetectorGraph &g) {
    std::ostringstream out;
    for (uint32_t i = 0; i < g.num_nodes; i++) {
        out << "NODE " << i << "\n";
    }
    for (const auto &e : g.edges) {
        out << "EDGE " << e.a << " " << (e.b == kBoundary ? std::string("BOUNDARY") : std::to_string(e.b))
            << " w=" << format_double(e.weight) << " flip=" << int(e.flip) << "\n";
    }
    return out.str();
}

DetectorGraph parse_detector_graph(const std::string &text) {
    DetectorGraph g;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) {
            continue;
        }
        auto fail = [&](const std::string &why) {
            return std::invalid_argument("detector graph line " + std::to_string(line_no) + ": " + why);
        };
        if (kind == "NODE") {
            uint32_t id;
            if (!(ls >> id)) {
                throw fail("expected a node id");
            }
            g.num_nodes = std::max(g.num_nodes, id + 1);
        } else if (kind == "EDGE") {
            uint32_t a;
            std::string b_text, w_text, flip_text;
            if (!(ls >> a >> b_text >> w_text >> flip_text) || w_text.rfind("w=", 0) != 0 ||
                flip_text.rfind("flip=", 0) != 0) {
                throw fail("expected EDGE <a> <b|BOUNDARY> w=<float> flip=<0|1>");
            }
            uint32_t b = b_text == "BOUNDARY" ? kBoundary : static_cast<uint32_t>(std::stoul(b_text));
            double w = std::stod(w_text.substr(2));
            if (!(w > 0)) {
                throw fail("edge weights must be positive");
            }
            g.edges.push_back({a, b, std::exp(-w), w, flip_text.substr(5) == "1"});
        } else {
            throw fail("unknown record '" + kind + "'");
        }
    }
    return g;
}

MatchingDecoder::MatchingDecoder(DetectorGraph g, size_t max_defects)
    : graph_(std::move(g)), max_defects_(max_defects), n_(graph_.num_nodes + 1) {
    dist_.assign(n_ * n_, kInf);
    flip_.assign(n_ * n_, 0);
    for (size_t i = 0; i < n_; i++) {
        dist_[i * n_ + i] = 0;
    }
    for (const auto &e : graph_.edges) {
        size_t a = index(e.a);
        size_t b = index(e.b);
        if (a >= n_ || b >= n_) {
            throw std::invalid_argument("edge references an unknown node");
        }
        if (e.weight < dist_[a * n_ + b]) {
            dist_[a * n_ + b] = dist_[b * n_ + a] = e.weight;
            flip_[a * n_ + b] = flip_[b * n_ + a] = e.flip;
        }
    }
    for (size_t k = 0; k < n_; k++) {
        for (size_t i = 0; i < n_; i++) {
            for (size_t j = 0; j < n_; j++) {
                double via = dist_[i * n_ + k] + dist_[k * n_ + j];
                if (better(via, dist_[i * n_ + j])) {
                    dist_[i * n_ + j] = via;
                    flip_[i * n_ + j] = flip_[i * n_ + k] ^ flip_[k * n_ + j];
                }
            }
        }
    }
}

double MatchingDecoder::distance(uint32_t a, uint32_t b) const {
    return dist_[index(a) * n_ + index(b)];
}

bool MatchingDecoder::path_flip(uint32_t a, uint32_t b) const {
    return flip_[index(a) * n_ + index(b)];
}

std::pair<double, bool> MatchingDecoder::solve(const std::vector<uint32_t> &fired_in) const {
    std::vector<uint32_t> fired = fired_in;
    std::sort(fired.begin(), fired.end());
    fired.erase(std::unique(fired.begin(), fired.end()), fired.end());
    size_t n = fired.size();
    if (n == 0) {
        return {0.0, false};
    }
    if (n > max_defects_) {
        throw CapacityError(
            "exact matching supports at most " + std::to_string(max_defects_) + " defects, syndrome has " +
            std::to_string(n));
    }
    for (uint32_t d : fired) {
        if (d >= graph_.num_nodes) {
            throw std::invalid_argument("fired detector " + std::to_string(d) + " is not a graph node");
        }
    }
    size_t full = (size_t{1} << n) - 1;
    std::vector<double> cost(full + 1, kInf);
    std::vector<uint8_t> flip(full + 1, 0);
    cost[0] = 0;
    for (size_t mask = 1; mask <= full; mask++) {
        size_t i = static_cast<size_t>(__builtin_ctzll(mask));
        size_t rest = mask & ~(size_t{1} << i);
        double best = kInf;
        bool best_flip = false;
        for (size_t j = i + 1; j < n; j++) {
            if (!(rest >> j & 1)) {
                continue;
            }
            size_t sub = rest & ~(size_t{1} << j);
            double c = distance(fired[i], fired[j]) + cost[sub];
            if (better(c, best)) {
                best = c;
                best_flip = path_flip(fired[i], fired[j]) ^ flip[sub];
            }
        }
        double c = distance(fired[i], kBoundary) + cost[rest];
        if (better(c, best)) {
            best = c;
            best_flip = path_flip(fired[i], kBoundary) ^ flip[rest];
        }
        cost[mask] = best;
        flip[mask] = best_flip;
    }
    if (!std::isfinite(cost[full])) {
        throw std::runtime_error("syndrome has no perfect matching in the detector graph");
    }
    return {cost[full], bool(flip[full])};
}

bool MatchingDecoder::decode(const std::vector<uint32_t> &fired) const {
    return solve(fired).second;
}

double MatchingDecoder::matching_weight(const std::vector<uint32_t> &fired) const {
    return solve(fired).first;
}

LookupDecoder::LookupDecoder(std::shared_ptr<const MatchingDecoder> fallback, size_t max_faults)
    : fallback_(std::move(fallback)) {
    const auto &edges = fallback_->graph().edges;
    if (fallback_->graph().num_nodes > 64) {
        throw CapacityError("lookup decoding supports at most 64 detectors");
    }
    auto edge_key = [](const DetectorGraph::Edge &e) {
        uint64_t key = uint64_t{1} << e.a;
        if (e.b != kBoundary) {
            key ^= uint64_t{1} << e.b;
        }
        return key;
    };
    table_[0] = {0.0, false};
    std::function<void(size_t, size_t, uint64_t, double, bool)> grow = [&](size_t start, size_t depth, uint64_t key,
                                                                           double weight, bool flip) {
        if (depth == max_faults) {
            return;
        }
        for (size_t e = start; e < edges.size(); e++) {
            uint64_t k = key ^ edge_key(edges[e]);
            double w = weight + edges[e].weight;
            bool f = flip ^ edges[e].flip;
            auto it = table_.find(k);
            if (it == table_.end() || better(w, it->second.first)) {
                table_[k] = {w, f};
            }
            grow(e + 1, depth + 1, k, w, f);
        }
    };
    grow(0, 0, 0, 0.0, false);
}

std::optional<bool> LookupDecoder::lookup(const std::vector<uint32_t> &fired) const {
    auto it = table_.find(syndrome_key(fired));
    if (it == table_.end()) {
        return std::nullopt;
    }
    return it->second.second;
}

bool LookupDecoder::decode(const std::vector<uint32_t> &fired) const {
    if (auto hit = lookup(fired)) {
        return *hit;
    }
    return fallback_->decode(fired);
}

ObservableFn decoded_observable(const BuiltCode &code, std::shared_ptr<const MatchingDecoder> decoder) {
    return [code, decoder](const BitVec &records) {
        bool value = logical_parity(code, records) ^ decoder->decode(syndrome_of(code, records));
        return value ? -1.0 : 1.0;
    };
}

ObservableFn raw_observable(const BuiltCode &code) {
    return [groups = code.raw_groups](const BitVec &records) {
        double total = 0;
        for (const auto &g : groups) {
            bool parity = false;
            for (uint32_t r : g) {
                parity ^= records[r];
            }
            total += parity ? -1.0 : 1.0;
        }
        return total / static_cast<double>(groups.size());
    };
}

DistanceReport verify_distance(const BuiltCode &code, const NoiseModel &m, uint32_t t) {
    FrameSimulator fs(code.circuit, m, kDefaultBranchBudget);
    MatchingDecoder decoder(build_detector_graph(code, m));
    const auto &noisy = fs.noisy_locations();
    DistanceReport report;
    report.max_weight = t;
    std::vector<size_t> chosen;
    BitVec zero(fs.num_records());
    std::function<void(size_t, const BitVec &)> visit = [&](size_t start, const BitVec &flips) {
        report.patterns_checked++;
        bool failed = decoder.decode(fired_detectors(code, flips)) != logical_parity(code, flips);
        if (failed) {
            report.failures++;
            uint32_t w = static_cast<uint32_t>(chosen.size());
            if (!report.min_failing_weight || w < *report.min_failing_weight) {
                report.min_failing_weight = w;
                std::ostringstream desc;
                desc << "weight " << w << " at ops";
                for (size_t l : chosen) {
                    desc << " " << fs.locations()[noisy[l].location].op_index;
                }
                report.first_failure = desc.str();
            }
        }
        if (chosen.size() == t) {
            return;
        }
        for (size_t l = start; l < noisy.size(); l++) {
            chosen.push_back(l);
            for (const auto &term : noisy[l].terms) {
                visit(l + 1, flips ^ term.flips);
            }
            chosen.pop_back();
        }
    };
    visit(0, zero);
    return report;
}

}  // namespace ftzne
