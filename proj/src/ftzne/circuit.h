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

#ifndef FTZNE_CIRCUIT_H
#define FTZNE_CIRCUIT_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ftzne {

enum class Basis : uint8_t { X, Y, Z };

enum class GateKind : uint8_t { I, X, Y, Z, H, S, RY, RZ, CNOT, CZ };

char basis_char(Basis b);
const char *gate_name(GateKind k);

struct PrepOp {
    Basis basis;
    uint32_t qubit;
    bool operator==(const PrepOp &) const = default;
};

struct Gate1Op {
    GateKind kind;
    uint32_t qubit;
    double theta = 0;  // RY and RZ only
    bool operator==(const Gate1Op &) const = default;
};

struct Gate2Op {
    GateKind kind;  // CNOT (control, target) or CZ
    uint32_t control;
    uint32_t target;
    bool operator==(const Gate2Op &) const = default;
};

struct MeasureOp {
    Basis basis;
    uint32_t qubit;
    uint32_t record;
    bool operator==(const MeasureOp &) const = default;
};

/// Applies the Pauli `pauli` to `qubit` when record `record` equals `bit`.
struct FeedbackOp {
    Basis pauli;
    uint32_t qubit;
    uint32_t record;
    uint8_t bit;
    bool operator==(const FeedbackOp &) const = default;
};

/// Accepts the shot only if record `record` equals `bit`.
struct PostSelectOp {
    uint32_t record;
    uint8_t bit;
    bool operator==(const PostSelectOp &) const = default;
};

/// A tagged fault-injection site. A no-op unless a noise model binds a channel.
struct InjectOp {
    uint32_t qubit;
    std::string site;
    bool operator==(const InjectOp &) const = default;
};

using Operation = std::variant<PrepOp, Gate1Op, Gate2Op, MeasureOp, FeedbackOp, PostSelectOp, InjectOp>;

/// (-1)^(parity of records), optionally negated.
struct ParityObservable {
    std::vector<uint32_t> records;
    bool negate = false;
    bool operator==(const ParityObservable &) const = default;
};

/// A logical parity corrected by a named decoder.
struct DecodedObservable {
    std::string decoder_id;
    std::vector<uint32_t> records;
    bool operator==(const DecodedObservable &) const = default;
};

using ObservableSpec = std::variant<ParityObservable, DecodedObservable>;

/// Measurement outcomes are stored as bits b; the eigenvalue (-1)^b is applied
/// only when an observable is evaluated.
struct Circuit {
    uint32_t num_qubits = 0;
    std::vector<Operation> ops;
    std::vector<std::string> records;
    std::map<std::string, std::string> metadata;
    std::vector<ObservableSpec> observables;

    /// Index of a record label, or nullopt.
    std::optional<uint32_t> find_record(std::string_view label) const;
    uint32_t record(std::string_view label) const;

    // Builder helpers. Each validates its arguments against the circuit so far.
    Circuit &prep(Basis basis, uint32_t qubit);
    Circuit &gate(GateKind kind, uint32_t qubit, double theta = 0);
    Circuit &gate2(GateKind kind, uint32_t control, uint32_t target);
    Circuit &measure(Basis basis, uint32_t qubit, std::string label);
    Circuit &feedback(Basis pauli, uint32_t qubit, std::string_view label, uint8_t bit);
    Circuit &post_select(std::string_view label, uint8_t bit);
    Circuit &inject(uint32_t qubit, std::string site);
    Circuit &append(const Circuit &other);

    size_t count_measurements() const;
    bool has_classical_control() const;

    bool operator==(const Circuit &) const = default;
};

/// The circuit with every FEEDBACK and POSTSELECT removed.
Circuit strip_classical_control(const Circuit &c);

class CircuitError : public std::runtime_error {
   public:
    enum class Kind { Syntax, UnknownOpcode, UndefinedRecord, QubitOutOfRange, DuplicateLabel };

    CircuitError(Kind kind, size_t line, size_t column, const std::string &message);

    Kind kind() const {
        return kind_;
    }
    size_t line() const {
        return line_;
    }
    size_t column() const {
        return column_;
    }

   private:
    Kind kind_;
    size_t line_;
    size_t column_;
};

Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit &c);

/// Re-checks the structural invariants of a circuit built in code.
void validate_circuit(const Circuit &c);

enum class LocationPolicy { InjectionOnly, AllOps };

enum class NoiseClass : uint8_t { Prep, Gate1, Gate2, Measure, Inject };

/// A place where a stochastic Pauli fault may occur. Gate and preparation
/// faults act after the operation; measurement faults act before it.
struct FaultLocation {
    uint32_t op_index;
    NoiseClass noise_class;
    std::vector<uint32_t> qubits;
    std::string site;  // injection sites only
    bool before_op() const {
        return noise_class == NoiseClass::Measure;
    }
    bool operator==(const FaultLocation &) const = default;
};

std::vector<FaultLocation> fault_locations(const Circuit &c, LocationPolicy policy);

}  // namespace ftzne

#endif
