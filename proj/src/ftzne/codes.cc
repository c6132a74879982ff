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

#include "ftzne/codes.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ftzne/errors.h"
#include "json.hpp"

namespace ftzne {

namespace {

constexpr uint32_t kSurfaceQubits = 17;
constexpr uint32_t kZAncilla0 = 9;
constexpr uint32_t kXAncilla0 = 13;
constexpr int kNone = -1;

// Corner slots of a plaquette: NW, NE, SW, SE. Missing corners are kNone.
using Corners = std::array<int, 4>;

constexpr int D(int r, int c) {
    return 3 * r + c;
}

const std::array<Corners, 4> kXPlaquettes = {{
    {D(0, 0), D(0, 1), D(1, 0), D(1, 1)},
    {D(1, 1), D(1, 2), D(2, 1), D(2, 2)},
    {kNone, kNone, D(0, 1), D(0, 2)},
    {D(2, 0), D(2, 1), kNone, kNone},
}};

const std::array<Corners, 4> kZPlaquettes = {{
    {D(0, 1), D(0, 2), D(1, 1), D(1, 2)},
    {D(1, 0), D(1, 1), D(2, 0), D(2, 1)},
    {kNone, D(0, 0), kNone, D(1, 0)},
    {D(1, 2), kNone, D(2, 2), kNone},
}};

// X checks visit corners in Z order and Z checks in N order, so that no data
// qubit is touched twice in one time step and the checks commute.
constexpr std::array<int, 4> kXOrder = {0, 1, 2, 3};
constexpr std::array<int, 4> kZOrder = {0, 2, 1, 3};

std::vector<std::vector<uint32_t>> plaquette_lists(const std::array<Corners, 4> &plaquettes) {
    std::vector<std::vector<uint32_t>> result;
    for (const auto &p : plaquettes) {
        std::vector<uint32_t> qs;
        for (int q : p) {
            if (q != kNone) {
                qs.push_back(static_cast<uint32_t>(q));
            }
        }
        std::sort(qs.begin(), qs.end());
        result.push_back(std::move(qs));
    }
    return result;
}

std::string site_name(size_t layer, uint32_t qubit) {
    return "L" + std::to_string(layer) + ".q" + std::to_string(qubit);
}

std::vector<std::string> inject_layer(Circuit &c, size_t layer, const std::vector<uint32_t> &qubits) {
    std::vector<std::string> sites;
    for (uint32_t q : qubits) {
        sites.push_back(site_name(layer, q));
        c.inject(q, sites.back());
    }
    return sites;
}

}  // namespace

std::vector<std::string> BuiltCode::sites() const {
    std::vector<std::string> all;
    for (const auto &layer : injection_layers) {
        all.insert(all.end(), layer.begin(), layer.end());
    }
    return all;
}

LogicalStateSpec LogicalStateSpec::zero() {
    return {Kind::Zero, 1, 0};
}

LogicalStateSpec LogicalStateSpec::plus() {
    double a = 1 / std::sqrt(2.0);
    return {Kind::Plus, a, a};
}

LogicalStateSpec LogicalStateSpec::amplitudes(double alpha, double beta) {
    if (!(std::abs(alpha * alpha + beta * beta - 1) <= 1e-10)) {
        throw DomainError("logical state amplitudes are not normalised");
    }
    return {Kind::Amplitudes, alpha, beta};
}

std::string code_family_name(CodeFamily f) {
    switch (f) {
        case CodeFamily::Fig2:
            return "fig2";
        case CodeFamily::Repetition:
            return "repetition";
        case CodeFamily::Surface:
            return "surface";
    }
    return "unknown";
}

BuiltCode build_fig2_example(double theta0, double theta2, double theta4) {
    BuiltCode code{CodeFamily::Fig2, {}, {}, {}, {}, {}, 1, 0, Basis::Z};
    Circuit &c = code.circuit;
    c.num_qubits = 5;
    c.gate(GateKind::RY, 0, theta0).gate(GateKind::RY, 2, theta2).gate(GateKind::RY, 4, theta4);
    auto parity_layer = [&c] {
        c.gate2(GateKind::CNOT, 0, 1).gate2(GateKind::CNOT, 2, 1);
        c.gate2(GateKind::CNOT, 2, 3).gate2(GateKind::CNOT, 4, 3);
    };
    parity_layer();
    code.injection_layers.push_back(inject_layer(c, 0, {0, 2, 4}));
    parity_layer();
    c.measure(Basis::Z, 1, "m1").measure(Basis::Z, 3, "m3");
    c.feedback(Basis::X, 0, "m1", 1).post_select("m3", 0);
    c.measure(Basis::Z, 0, "m0").measure(Basis::Z, 2, "m2").measure(Basis::Z, 4, "m4");
    code.detectors = {{{c.record("m1")}, 0}, {{c.record("m3")}, 0}};
    code.logical = {"Z0", {c.record("m0")}};
    code.raw_groups = {{c.record("m0")}};
    c.metadata["code"] = "fig2";
    return code;
}

BuiltCode build_repetition(uint32_t d, uint32_t M) {
    if (d != 3 && d != 5 && d != 7) {
        throw std::invalid_argument("repetition code distance must be 3, 5 or 7");
    }
    if (M < 1 || M > 4) {
        throw std::invalid_argument("repetition code rounds must be between 1 and 4");
    }
    BuiltCode code{CodeFamily::Repetition, {}, {}, {}, {}, {}, d, M, Basis::Z};
    Circuit &c = code.circuit;
    c.num_qubits = 2 * d - 1;
    std::vector<uint32_t> data;
    for (uint32_t i = 0; i < d; i++) {
        data.push_back(2 * i);
    }
    for (uint32_t q = 0; q < c.num_qubits; q++) {
        c.prep(Basis::Z, q);
    }
    auto syndrome = [](uint32_t round, uint32_t i) {
        return "s" + std::to_string(round) + "." + std::to_string(i);
    };
    for (uint32_t t = 0; t < M; t++) {
        code.injection_layers.push_back(inject_layer(c, t, data));
        for (uint32_t i = 0; i + 1 < d; i++) {
            c.gate2(GateKind::CNOT, 2 * i, 2 * i + 1);
        }
        for (uint32_t i = 0; i + 1 < d; i++) {
            c.gate2(GateKind::CNOT, 2 * i + 2, 2 * i + 1);
        }
        for (uint32_t i = 0; i + 1 < d; i++) {
            c.measure(Basis::Z, 2 * i + 1, syndrome(t, i));
        }
        for (uint32_t i = 0; i + 1 < d; i++) {
            c.prep(Basis::Z, 2 * i + 1);
        }
    }
    code.injection_layers.push_back(inject_layer(c, M, data));
    for (uint32_t i = 0; i < d; i++) {
        c.measure(Basis::Z, 2 * i, "d" + std::to_string(i));
    }
    for (uint32_t t = 0; t < M; t++) {
        for (uint32_t i = 0; i + 1 < d; i++) {
            Detector det{{c.record(syndrome(t, i))}, 0};
            if (t > 0) {
                det.records.push_back(c.record(syndrome(t - 1, i)));
            }
            code.detectors.push_back(det);
        }
    }
    for (uint32_t i = 0; i + 1 < d; i++) {
        code.detectors.push_back(
            {{c.record("d" + std::to_string(i)), c.record("d" + std::to_string(i + 1)), c.record(syndrome(M - 1, i))},
             0});
    }
    code.logical = {"Z_L", {c.record("d0")}};
    for (uint32_t i = 0; i < d; i++) {
        code.raw_groups.push_back({c.record("d" + std::to_string(i))});
    }
    c.metadata["code"] = "repetition";
    c.metadata["d"] = std::to_string(d);
    c.metadata["M"] = std::to_string(M);
    return code;
}

const std::vector<std::vector<uint32_t>> &surface_x_stabilizers() {
    static const auto lists = plaquette_lists(kXPlaquettes);
    return lists;
}

const std::vector<std::vector<uint32_t>> &surface_z_stabilizers() {
    static const auto lists = plaquette_lists(kZPlaquettes);
    return lists;
}

PauliTerm surface_logical_x(uint32_t num_qubits) {
    PauliTerm p(num_qubits);
    for (uint32_t r = 0; r < 3; r++) {
        p.set_letter(surface_data(r, 1), 'X');
    }
    return p;
}

PauliTerm surface_logical_z(uint32_t num_qubits) {
    PauliTerm p(num_qubits);
    for (uint32_t c = 0; c < 3; c++) {
        p.set_letter(surface_data(1, c), 'Z');
    }
    return p;
}

Circuit prep_logical_state_circuit(const LogicalStateSpec &spec) {
    Circuit c;
    c.num_qubits = kSurfaceQubits;
    double theta = 2 * std::atan2(spec.beta, spec.alpha);
    bool zero = spec.kind == LogicalStateSpec::Kind::Zero;
    if (!zero && theta != 0) {
        c.gate(GateKind::RY, surface_data(1, 1), theta);
    }
    // Representative qubits, one per X stabilizer, each in no other X
    // stabilizer and off the vertical logical line.
    const std::array<uint32_t, 4> reps = {
        surface_data(0, 0), surface_data(2, 2), surface_data(0, 2), surface_data(2, 0)};
    for (uint32_t q : reps) {
        c.gate(GateKind::H, q);
    }
    if (!zero) {
        // Copy D4 onto D1 and D7 through the Z syndrome qubits between them;
        // each syndrome qubit returns to |0>.
        const std::array<std::pair<uint32_t, uint32_t>, 2> hops = {
            {{surface_data(0, 1), kZAncilla0 + 0}, {surface_data(2, 1), kZAncilla0 + 1}}};
        for (const auto &[target, anc] : hops) {
            c.gate2(GateKind::CNOT, surface_data(1, 1), anc);
            c.gate2(GateKind::CNOT, anc, target);
            c.gate2(GateKind::CNOT, target, anc);
        }
    }
    const auto &xs = surface_x_stabilizers();
    for (size_t s = 0; s < xs.size(); s++) {
        for (uint32_t q : xs[s]) {
            if (q != reps[s]) {
                c.gate2(GateKind::CNOT, reps[s], q);
            }
        }
    }
    return c;
}

BuiltCode build_surface_d3(const LogicalStateSpec &spec, Basis basis, bool calibration_sites) {
    if (basis != Basis::Z && basis != Basis::X) {
        throw std::invalid_argument("surface code readout basis must be Z or X");
    }
    BuiltCode code{CodeFamily::Surface, {}, {}, {}, {}, {}, 3, 1, basis};
    Circuit &c = code.circuit;
    c.num_qubits = kSurfaceQubits;
    c.append(prep_logical_state_circuit(spec));
    if (calibration_sites) {
        for (uint32_t q = 0; q < kSurfaceQubits; q++) {
            c.inject(q, "cal" + std::to_string(q));
        }
    }
    std::vector<uint32_t> data;
    for (uint32_t q = 0; q < 9; q++) {
        data.push_back(q);
    }
    code.injection_layers.push_back(inject_layer(c, 0, data));

    for (uint32_t j = 0; j < 4; j++) {
        c.gate(GateKind::H, kXAncilla0 + j);
    }
    for (int step = 0; step < 4; step++) {
        for (uint32_t j = 0; j < 4; j++) {
            int q = kXPlaquettes[j][kXOrder[step]];
            if (q != kNone) {
                c.gate2(GateKind::CNOT, kXAncilla0 + j, static_cast<uint32_t>(q));
            }
        }
        for (uint32_t j = 0; j < 4; j++) {
            int q = kZPlaquettes[j][kZOrder[step]];
            if (q != kNone) {
                c.gate2(GateKind::CNOT, static_cast<uint32_t>(q), kZAncilla0 + j);
            }
        }
    }
    for (uint32_t j = 0; j < 4; j++) {
        c.gate(GateKind::H, kXAncilla0 + j);
    }
    for (uint32_t j = 0; j < 4; j++) {
        c.measure(Basis::Z, kZAncilla0 + j, "z" + std::to_string(j));
    }
    for (uint32_t j = 0; j < 4; j++) {
        c.measure(Basis::Z, kXAncilla0 + j, "x" + std::to_string(j));
    }

    code.injection_layers.push_back(inject_layer(c, 1, data));
    for (uint32_t q : data) {
        if (basis == Basis::X) {
            c.gate(GateKind::H, q);
        }
        c.measure(Basis::Z, q, "d" + std::to_string(q));
    }

    auto data_record = [&c](uint32_t q) {
        return c.record("d" + std::to_string(q));
    };
    const auto &same = basis == Basis::Z ? surface_z_stabilizers() : surface_x_stabilizers();
    const char *same_prefix = basis == Basis::Z ? "z" : "x";
    const char *other_prefix = basis == Basis::Z ? "x" : "z";
    for (uint32_t j = 0; j < 4; j++) {
        code.detectors.push_back({{c.record(same_prefix + std::to_string(j))}, 0});
    }
    for (uint32_t j = 0; j < 4; j++) {
        Detector det{{c.record(same_prefix + std::to_string(j))}, 0};
        for (uint32_t q : same[j]) {
            det.records.push_back(data_record(q));
        }
        code.detectors.push_back(det);
    }
    for (uint32_t j = 0; j < 4; j++) {
        code.detectors.push_back({{c.record(other_prefix + std::to_string(j))}, 0});
    }

    std::vector<uint32_t> line;
    for (uint32_t k = 0; k < 3; k++) {
        line.push_back(data_record(basis == Basis::Z ? surface_data(1, k) : surface_data(k, 1)));
    }
    code.logical = {basis == Basis::Z ? "Z_L" : "X_L", line};
    code.raw_groups = {line};
    c.metadata["code"] = "surface";
    c.metadata["d"] = "3";
    c.metadata["basis"] = std::string(1, basis_char(basis));
    return code;
}

std::string detectors_text(const BuiltCode &code) {
    std::ostringstream out;
    for (size_t i = 0; i < code.detectors.size(); i++) {
        const auto &det = code.detectors[i];
        out << "DET " << i << " =";
        for (size_t k = 0; k < det.records.size(); k++) {
            out << (k == 0 ? " " : "^") << code.circuit.records[det.records[k]];
        }
        out << " expect " << int(det.expected) << "\n";
    }
    return out.str();
}

std::string logical_text(const BuiltCode &code) {
    std::ostringstream out;
    out << "LOGICAL " << code.logical.name << " =";
    for (size_t k = 0; k < code.logical.records.size(); k++) {
        out << (k == 0 ? " " : "^") << code.circuit.records[code.logical.records[k]];
    }
    out << "\n";
    return out.str();
}

std::string code_manifest_json(const BuiltCode &code) {
    nlohmann::json j;
    j["family"] = code_family_name(code.family);
    j["d"] = code.d;
    j["M"] = code.M;
    j["basis"] = std::string(1, basis_char(code.basis));
    j["num_qubits"] = code.circuit.num_qubits;
    j["sites"] = code.injection_layers;
    j["detectors"] = code.detectors.size();
    j["logical"] = code.logical.name;
    return j.dump(2);
}

}  // namespace ftzne
