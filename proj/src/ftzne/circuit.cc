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

#include "ftzne/circuit.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace ftzne {

char basis_char(Basis b) {
    return "XYZ"[static_cast<int>(b)];
}

const char *gate_name(GateKind k) {
    static const char *const kNames[] = {"I", "X", "Y", "Z", "H", "S", "RY", "RZ", "CNOT", "CZ"};
    return kNames[static_cast<int>(k)];
}

CircuitError::CircuitError(Kind kind, size_t line, size_t column, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {
}

std::optional<uint32_t> Circuit::find_record(std::string_view label) const {
    for (size_t k = 0; k < records.size(); k++) {
        if (records[k] == label) {
            return static_cast<uint32_t>(k);
        }
    }
    return std::nullopt;
}

uint32_t Circuit::record(std::string_view label) const {
    auto r = find_record(label);
    if (!r) {
        throw CircuitError(CircuitError::Kind::UndefinedRecord, 0, 0, "undefined record '" + std::string(label) + "'");
    }
    return *r;
}

namespace {

void check_qubit(const Circuit &c, uint32_t q) {
    if (q >= c.num_qubits) {
        throw CircuitError(
            CircuitError::Kind::QubitOutOfRange,
            0,
            0,
            "qubit " + std::to_string(q) + " out of range for " + std::to_string(c.num_qubits) + " qubits");
    }
}

}  // namespace

Circuit &Circuit::prep(Basis basis, uint32_t qubit) {
    check_qubit(*this, qubit);
    ops.emplace_back(PrepOp{basis, qubit});
    return *this;
}

Circuit &Circuit::gate(GateKind kind, uint32_t qubit, double theta) {
    check_qubit(*this, qubit);
    if (kind == GateKind::CNOT || kind == GateKind::CZ) {
        throw std::invalid_argument("two-qubit gate used as single-qubit gate");
    }
    ops.emplace_back(Gate1Op{kind, qubit, (kind == GateKind::RY || kind == GateKind::RZ) ? theta : 0.0});
    return *this;
}

Circuit &Circuit::gate2(GateKind kind, uint32_t control, uint32_t target) {
    check_qubit(*this, control);
    check_qubit(*this, target);
    if (kind != GateKind::CNOT && kind != GateKind::CZ) {
        throw std::invalid_argument("single-qubit gate used as two-qubit gate");
    }
    if (control == target) {
        throw std::invalid_argument("two-qubit gate on a single qubit");
    }
    ops.emplace_back(Gate2Op{kind, control, target});
    return *this;
}

Circuit &Circuit::measure(Basis basis, uint32_t qubit, std::string label) {
    check_qubit(*this, qubit);
    if (find_record(label)) {
        throw CircuitError(CircuitError::Kind::DuplicateLabel, 0, 0, "record '" + label + "' already defined");
    }
    records.push_back(std::move(label));
    ops.emplace_back(MeasureOp{basis, qubit, static_cast<uint32_t>(records.size() - 1)});
    return *this;
}

Circuit &Circuit::feedback(Basis pauli, uint32_t qubit, std::string_view label, uint8_t bit) {
    check_qubit(*this, qubit);
    ops.emplace_back(FeedbackOp{pauli, qubit, record(label), bit});
    return *this;
}

Circuit &Circuit::post_select(std::string_view label, uint8_t bit) {
    ops.emplace_back(PostSelectOp{record(label), bit});
    return *this;
}

Circuit &Circuit::inject(uint32_t qubit, std::string site) {
    check_qubit(*this, qubit);
    for (const auto &op : ops) {
        if (auto *inj = std::get_if<InjectOp>(&op); inj && inj->site == site) {
            throw CircuitError(CircuitError::Kind::DuplicateLabel, 0, 0, "site '" + site + "' already defined");
        }
    }
    ops.emplace_back(InjectOp{qubit, std::move(site)});
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.num_qubits > num_qubits) {
        throw std::invalid_argument("appended circuit uses more qubits");
    }
    uint32_t offset = static_cast<uint32_t>(records.size());
    for (const auto &label : other.records) {
        if (find_record(label)) {
            throw CircuitError(CircuitError::Kind::DuplicateLabel, 0, 0, "record '" + label + "' already defined");
        }
    }
    records.insert(records.end(), other.records.begin(), other.records.end());
    for (Operation op : other.ops) {
        std::visit(
            [&](auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (
                    std::is_same_v<T, MeasureOp> || std::is_same_v<T, FeedbackOp> ||
                    std::is_same_v<T, PostSelectOp>) {
                    o.record += offset;
                }
            },
            op);
        ops.push_back(std::move(op));
    }
    return *this;
}

size_t Circuit::count_measurements() const {
    return std::count_if(ops.begin(), ops.end(), [](const Operation &op) {
        return std::holds_alternative<MeasureOp>(op);
    });
}

bool Circuit::has_classical_control() const {
    return std::any_of(ops.begin(), ops.end(), [](const Operation &op) {
        return std::holds_alternative<FeedbackOp>(op) || std::holds_alternative<PostSelectOp>(op);
    });
}

Circuit strip_classical_control(const Circuit &c) {
    Circuit result = c;
    std::erase_if(result.ops, [](const Operation &op) {
        return std::holds_alternative<FeedbackOp>(op) || std::holds_alternative<PostSelectOp>(op);
    });
    return result;
}

void validate_circuit(const Circuit &c) {
    using K = CircuitError::Kind;
    std::vector<bool> produced(c.records.size(), false);
    std::set<std::string> sites;
    for (size_t k = 0; k < c.ops.size(); k++) {
        const auto &op = c.ops[k];
        auto where = [&](const std::string &msg) {
            return "op " + std::to_string(k) + ": " + msg;
        };
        auto qubit_ok = [&](uint32_t q) {
            if (q >= c.num_qubits) {
                throw CircuitError(K::QubitOutOfRange, 0, 0, where("qubit " + std::to_string(q) + " out of range"));
            }
        };
        auto record_ok = [&](uint32_t r) {
            if (r >= c.records.size() || !produced[r]) {
                throw CircuitError(K::UndefinedRecord, 0, 0, where("record used before it is measured"));
            }
        };
        std::visit(
            [&](const auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, PrepOp> || std::is_same_v<T, Gate1Op>) {
                    qubit_ok(o.qubit);
                } else if constexpr (std::is_same_v<T, Gate2Op>) {
                    qubit_ok(o.control);
                    qubit_ok(o.target);
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    qubit_ok(o.qubit);
                    if (o.record >= c.records.size() || produced[o.record]) {
                        throw CircuitError(K::DuplicateLabel, 0, 0, where("record produced twice or missing"));
                    }
                    produced[o.record] = true;
                } else if constexpr (std::is_same_v<T, FeedbackOp>) {
                    qubit_ok(o.qubit);
                    record_ok(o.record);
                } else if constexpr (std::is_same_v<T, PostSelectOp>) {
                    record_ok(o.record);
                } else if constexpr (std::is_same_v<T, InjectOp>) {
                    qubit_ok(o.qubit);
                    if (!sites.insert(o.site).second) {
                        throw CircuitError(K::DuplicateLabel, 0, 0, where("duplicate site '" + o.site + "'"));
                    }
                }
            },
            op);
    }
    for (size_t r = 0; r < produced.size(); r++) {
        if (!produced[r]) {
            throw CircuitError(K::UndefinedRecord, 0, 0, "record '" + c.records[r] + "' never measured");
        }
    }
    for (const auto &obs : c.observables) {
        const auto &recs = std::visit([](const auto &o) -> const std::vector<uint32_t> & { return o.records; }, obs);
        for (uint32_t r : recs) {
            if (r >= c.records.size()) {
                throw CircuitError(K::UndefinedRecord, 0, 0, "observable references undefined record");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Text format.

namespace {

struct Token {
    std::string_view text;
    size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        if (k >= line.size()) {
            break;
        }
        size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        tokens.push_back({line.substr(start, k - start), start + 1});
    }
    return tokens;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char &c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_label(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':')) {
            return false;
        }
    }
    return true;
}

class LineParser {
   public:
    LineParser(Circuit &c, size_t line_no, std::vector<Token> tokens)
        : c_(c), line_(line_no), tokens_(std::move(tokens)) {
    }

    [[noreturn]] void fail(CircuitError::Kind kind, size_t column, const std::string &msg) const {
        throw CircuitError(kind, line_, column, msg);
    }

    [[noreturn]] void syntax(size_t column, const std::string &msg) const {
        fail(CircuitError::Kind::Syntax, column, msg);
    }

    size_t end_column() const {
        return tokens_.empty() ? 1 : tokens_.back().column + tokens_.back().text.size();
    }

    const Token &arg(size_t k) const {
        if (k >= tokens_.size()) {
            syntax(end_column(), "missing argument " + std::to_string(k) + " for " + upper(tokens_[0].text));
        }
        return tokens_[k];
    }

    void expect_count(size_t n) const {
        if (tokens_.size() > n) {
            syntax(tokens_[n].column, "unexpected token '" + std::string(tokens_[n].text) + "'");
        }
        if (tokens_.size() < n) {
            arg(n - 1);
        }
    }

    uint64_t parse_uint(const Token &t) const {
        uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
            syntax(t.column, "expected a non-negative integer, got '" + std::string(t.text) + "'");
        }
        return value;
    }

    uint32_t parse_qubit(const Token &t) const {
        uint64_t q = parse_uint(t);
        if (!qubits_declared_) {
            syntax(t.column, "QUBITS must be declared before use");
        }
        if (q >= c_.num_qubits) {
            fail(
                CircuitError::Kind::QubitOutOfRange,
                t.column,
                "qubit " + std::to_string(q) + " out of range for " + std::to_string(c_.num_qubits) + " qubits");
        }
        return static_cast<uint32_t>(q);
    }

    Basis parse_basis(const Token &t) const {
        std::string u = upper(t.text);
        if (u == "X") {
            return Basis::X;
        }
        if (u == "Y") {
            return Basis::Y;
        }
        if (u == "Z") {
            return Basis::Z;
        }
        syntax(t.column, "expected X, Y or Z, got '" + std::string(t.text) + "'");
    }

    double parse_keyed_double(const Token &t, std::string_view key) const {
        std::string prefix = std::string(key) + "=";
        if (t.text.substr(0, prefix.size()) != prefix) {
            syntax(t.column, "expected " + prefix + "<value>");
        }
        std::string body(t.text.substr(prefix.size()));
        char *end = nullptr;
        double v = std::strtod(body.c_str(), &end);
        if (body.empty() || end != body.c_str() + body.size() || !std::isfinite(v)) {
            syntax(t.column + prefix.size(), "bad number '" + body + "'");
        }
        return v;
    }

    std::string parse_keyed_label(const Token &t, std::string_view key) const {
        std::string prefix = std::string(key) + "=";
        if (t.text.substr(0, prefix.size()) != prefix || !is_label(t.text.substr(prefix.size()))) {
            syntax(t.column, "expected " + prefix + "<id>");
        }
        return std::string(t.text.substr(prefix.size()));
    }

    uint32_t lookup_record(std::string_view label, size_t column) const {
        auto r = c_.find_record(label);
        if (!r) {
            fail(CircuitError::Kind::UndefinedRecord, column, "undefined record '" + std::string(label) + "'");
        }
        return *r;
    }

    // Parses "<label>==<0|1>" possibly split across the remaining tokens.
    std::pair<uint32_t, uint8_t> parse_condition(size_t first) const {
        arg(first);
        std::string joined;
        for (size_t k = first; k < tokens_.size(); k++) {
            joined += tokens_[k].text;
        }
        size_t column = tokens_[first].column;
        size_t eq = joined.find("==");
        if (eq == std::string::npos) {
            syntax(column, "expected <label>==<0|1>");
        }
        std::string label = joined.substr(0, eq);
        std::string bit = joined.substr(eq + 2);
        if (!is_label(label)) {
            syntax(column, "bad record label '" + label + "'");
        }
        if (bit != "0" && bit != "1") {
            syntax(column + eq + 2, "condition bit must be 0 or 1");
        }
        return {lookup_record(label, column), static_cast<uint8_t>(bit[0] - '0')};
    }

    void parse(bool &qubits_declared) {
        qubits_declared_ = qubits_declared;
        const Token &head = tokens_[0];
        std::string op = upper(head.text);
        if (op == "QUBITS") {
            expect_count(2);
            if (qubits_declared) {
                syntax(head.column, "QUBITS declared twice");
            }
            if (!c_.ops.empty()) {
                syntax(head.column, "QUBITS must come before operations");
            }
            uint64_t n = parse_uint(tokens_[1]);
            if (n > (uint64_t{1} << 20)) {
                fail(CircuitError::Kind::QubitOutOfRange, tokens_[1].column, "qubit count too large");
            }
            c_.num_qubits = static_cast<uint32_t>(n);
            qubits_declared = true;
        } else if (op == "PREP") {
            expect_count(3);
            Basis b = parse_basis(tokens_[1]);
            c_.ops.emplace_back(PrepOp{b, parse_qubit(tokens_[2])});
        } else if (op == "I" || op == "X" || op == "Y" || op == "Z" || op == "H" || op == "S") {
            expect_count(2);
            static const std::map<std::string, GateKind> kinds = {
                {"I", GateKind::I},
                {"X", GateKind::X},
                {"Y", GateKind::Y},
                {"Z", GateKind::Z},
                {"H", GateKind::H},
                {"S", GateKind::S}};
            c_.ops.emplace_back(Gate1Op{kinds.at(op), parse_qubit(tokens_[1]), 0.0});
        } else if (op == "RY" || op == "RZ") {
            expect_count(3);
            uint32_t q = parse_qubit(tokens_[1]);
            double theta = parse_keyed_double(tokens_[2], "theta");
            c_.ops.emplace_back(Gate1Op{op == "RY" ? GateKind::RY : GateKind::RZ, q, theta});
        } else if (op == "CNOT" || op == "CZ") {
            expect_count(3);
            uint32_t a = parse_qubit(tokens_[1]);
            uint32_t b = parse_qubit(tokens_[2]);
            if (a == b) {
                syntax(tokens_[2].column, "two-qubit gate needs distinct qubits");
            }
            c_.ops.emplace_back(Gate2Op{op == "CNOT" ? GateKind::CNOT : GateKind::CZ, a, b});
        } else if (op == "MEASURE") {
            expect_count(5);
            Basis b = parse_basis(tokens_[1]);
            uint32_t q = parse_qubit(tokens_[2]);
            if (tokens_[3].text != "->") {
                syntax(tokens_[3].column, "expected '->'");
            }
            std::string label(tokens_[4].text);
            if (!is_label(label)) {
                syntax(tokens_[4].column, "bad record label '" + label + "'");
            }
            if (c_.find_record(label)) {
                fail(CircuitError::Kind::DuplicateLabel, tokens_[4].column, "record '" + label + "' defined twice");
            }
            c_.records.push_back(label);
            c_.ops.emplace_back(MeasureOp{b, q, static_cast<uint32_t>(c_.records.size() - 1)});
        } else if (op == "FEEDBACK") {
            Basis p = parse_basis(arg(1));
            uint32_t q = parse_qubit(arg(2));
            if (upper(arg(3).text) != "IF") {
                syntax(tokens_[3].column, "expected IF");
            }
            auto [record, bit] = parse_condition(4);
            c_.ops.emplace_back(FeedbackOp{p, q, record, bit});
        } else if (op == "POSTSELECT") {
            auto [record, bit] = parse_condition(1);
            c_.ops.emplace_back(PostSelectOp{record, bit});
        } else if (op == "INJECT") {
            expect_count(3);
            uint32_t q = parse_qubit(tokens_[1]);
            std::string site = parse_keyed_label(tokens_[2], "site");
            for (const auto &existing : c_.ops) {
                if (auto *inj = std::get_if<InjectOp>(&existing); inj && inj->site == site) {
                    fail(CircuitError::Kind::DuplicateLabel, tokens_[2].column, "site '" + site + "' defined twice");
                }
            }
            c_.ops.emplace_back(InjectOp{q, site});
        } else if (op == "OBS") {
            std::string kind = upper(arg(1).text);
            if (kind == "PARITY") {
                ParityObservable obs;
                for (size_t k = 2; k < tokens_.size(); k++) {
                    if (tokens_[k].text == "sign=-1") {
                        obs.negate = true;
                    } else if (tokens_[k].text == "sign=+1" || tokens_[k].text == "sign=1") {
                        obs.negate = false;
                    } else {
                        obs.records.push_back(lookup_record(tokens_[k].text, tokens_[k].column));
                    }
                }
                c_.observables.emplace_back(std::move(obs));
            } else if (kind == "DECODED") {
                DecodedObservable obs;
                obs.decoder_id = std::string(arg(2).text);
                if (!is_label(obs.decoder_id)) {
                    syntax(tokens_[2].column, "bad decoder id");
                }
                for (size_t k = 3; k < tokens_.size(); k++) {
                    obs.records.push_back(lookup_record(tokens_[k].text, tokens_[k].column));
                }
                c_.observables.emplace_back(std::move(obs));
            } else {
                syntax(tokens_[1].column, "expected PARITY or DECODED");
            }
        } else {
            fail(CircuitError::Kind::UnknownOpcode, head.column, "unknown opcode '" + std::string(head.text) + "'");
        }
    }

   private:
    Circuit &c_;
    size_t line_;
    std::vector<Token> tokens_;
    bool qubits_declared_ = false;
};

std::string format_theta(double theta) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", theta);
    return buf;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    bool qubits_declared = false;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            std::string_view comment = line.substr(hash + 1);
            // "# @key value" lines carry circuit metadata.
            auto ctoks = tokenize(comment);
            if (!ctoks.empty() && ctoks[0].text.size() > 1 && ctoks[0].text[0] == '@') {
                std::string key(ctoks[0].text.substr(1));
                size_t start = ctoks.size() > 1 ? ctoks[1].column - 1 : comment.size();
                std::string value(comment.substr(start));
                while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) {
                    value.pop_back();
                }
                c.metadata[key] = value;
            }
            line = line.substr(0, hash);
        }
        for (char ch : line) {
            if (static_cast<unsigned char>(ch) < 0x20 && ch != '\t') {
                throw CircuitError(CircuitError::Kind::Syntax, line_no, 1, "control character in input");
            }
        }
        auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        LineParser(c, line_no, std::move(tokens)).parse(qubits_declared);
    }
    return c;
}

std::string serialize_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "QUBITS " << c.num_qubits << "\n";
    for (const auto &[key, value] : c.metadata) {
        out << "# @" << key << " " << value << "\n";
    }
    for (const auto &op : c.ops) {
        std::visit(
            [&](const auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, PrepOp>) {
                    out << "PREP " << basis_char(o.basis) << " " << o.qubit;
                } else if constexpr (std::is_same_v<T, Gate1Op>) {
                    out << gate_name(o.kind) << " " << o.qubit;
                    if (o.kind == GateKind::RY || o.kind == GateKind::RZ) {
                        out << " theta=" << format_theta(o.theta);
                    }
                } else if constexpr (std::is_same_v<T, Gate2Op>) {
                    out << gate_name(o.kind) << " " << o.control << " " << o.target;
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    out << "MEASURE " << basis_char(o.basis) << " " << o.qubit << " -> " << c.records[o.record];
                } else if constexpr (std::is_same_v<T, FeedbackOp>) {
                    out << "FEEDBACK " << basis_char(o.pauli) << " " << o.qubit << " IF " << c.records[o.record]
                        << "==" << int(o.bit);
                } else if constexpr (std::is_same_v<T, PostSelectOp>) {
                    out << "POSTSELECT " << c.records[o.record] << "==" << int(o.bit);
                } else if constexpr (std::is_same_v<T, InjectOp>) {
                    out << "INJECT " << o.qubit << " site=" << o.site;
                }
            },
            op);
        out << "\n";
    }
    for (const auto &obs : c.observables) {
        if (auto *p = std::get_if<ParityObservable>(&obs)) {
            out << "OBS PARITY";
            for (uint32_t r : p->records) {
                out << " " << c.records[r];
            }
            if (p->negate) {
                out << " sign=-1";
            }
        } else {
            const auto &d = std::get<DecodedObservable>(obs);
            out << "OBS DECODED " << d.decoder_id;
            for (uint32_t r : d.records) {
                out << " " << c.records[r];
            }
        }
        out << "\n";
    }
    return out.str();
}

std::vector<FaultLocation> fault_locations(const Circuit &c, LocationPolicy policy) {
    std::vector<FaultLocation> result;
    bool all = policy == LocationPolicy::AllOps;
    for (size_t k = 0; k < c.ops.size(); k++) {
        auto idx = static_cast<uint32_t>(k);
        std::visit(
            [&](const auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, InjectOp>) {
                    result.push_back({idx, NoiseClass::Inject, {o.qubit}, o.site});
                } else if (all) {
                    if constexpr (std::is_same_v<T, PrepOp>) {
                        result.push_back({idx, NoiseClass::Prep, {o.qubit}, {}});
                    } else if constexpr (std::is_same_v<T, Gate1Op>) {
                        result.push_back({idx, NoiseClass::Gate1, {o.qubit}, {}});
                    } else if constexpr (std::is_same_v<T, Gate2Op>) {
                        result.push_back({idx, NoiseClass::Gate2, {o.control, o.target}, {}});
                    } else if constexpr (std::is_same_v<T, MeasureOp>) {
                        result.push_back({idx, NoiseClass::Measure, {o.qubit}, {}});
                    }
                }
            },
            c.ops[k]);
    }
    return result;
}

}  // namespace ftzne
