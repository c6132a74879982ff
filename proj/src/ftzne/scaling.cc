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

#include "ftzne/scaling.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ftzne/format.h"
#include "ftzne/zne.h"

namespace ftzne {

namespace {

double unclamped_rate(const LogicalRateModel &model, double p, uint32_t d) {
    return model.A * std::pow(p / model.p_th, double(leading_power(d)));
}

}  // namespace

LogicalRateModel LogicalRateModel::calibrated() {
    return fit(0.03, 1e-3, 11, 2e-10);
}

LogicalRateModel LogicalRateModel::fit(double A, double p, uint32_t d, double target) {
    if (!(A > 0) || !(p > 0) || !(target > 0)) {
        throw std::invalid_argument("calibration needs positive A, p and target rate");
    }
    LogicalRateModel m;
    m.A = A;
    m.p_th = p * std::pow(A / target, 1.0 / double(leading_power(d)));
    return m;
}

double logical_error_rate(const LogicalRateModel &model, double p, uint32_t d) {
    if (!(p > 0) || d % 2 == 0) {
        throw std::invalid_argument("logical error rate needs p > 0 and odd d");
    }
    double rate = unclamped_rate(model, p, d);
    return std::min(0.5, std::max(0.0, rate));
}

std::vector<double> MemorySpec::r_schedule() const {
    std::vector<double> rs;
    double e = double(leading_power(d));
    for (uint32_t k = 1; k <= K + 1; k++) {
        rs.push_back(std::pow(double(k), 1.0 / e));
    }
    return rs;
}

double memory_expectation(const MemorySpec &spec, const LogicalRateModel &model, double r) {
    double pl = logical_error_rate(model, r * spec.p, spec.d);
    return std::exp(double(spec.N) * std::log1p(-2 * pl));
}

Projection projected_zne(const MemorySpec &spec, const LogicalRateModel &model) {
    Projection out;
    out.rs = spec.r_schedule();
    std::vector<DataPoint> points;
    for (double r : out.rs) {
        double v = memory_expectation(spec, model, r);
        out.values.push_back(v);
        points.push_back({r, v, 0, 0});
    }
    ZneResult z = extrapolate(points, spec.d, spec.K);
    out.coeffs = z.coeffs;
    out.mitigated = z.value;
    out.delta = bias(z.value, 1.0);
    out.delta0 = bias(out.values[0], 1.0);
    out.delta_ratio = out.delta0 > 0 ? out.delta / out.delta0 : 0.0;
    out.eta = z.overhead;
    return out;
}

BiasBounds bias_bounds(
    const MemorySpec &spec, const LogicalRateModel &model, const std::vector<double> &rs, const std::vector<double> &b) {
    if (rs.size() != b.size()) {
        throw std::invalid_argument("noise factors and coefficients differ in length");
    }
    auto p_tot = [&](double r) {
        return double(spec.N) * logical_error_rate(model, r * spec.p, spec.d);
    };
    BiasBounds out;
    out.delta_tilde_0 = std::expm1(2 * p_tot(1.0));
    for (size_t k = 0; k < rs.size(); k++) {
        double x = 2 * p_tot(rs[k]);
        out.delta_tilde_1 += std::abs(b[k]) * (std::expm1(x) - x);
    }
    double n = double(spec.N);
    out.delta_tilde_2 = [rs, b, n](const std::function<double(double)> &residual) {
        double s = 0;
        for (size_t k = 0; k < rs.size(); k++) {
            s += b[k] * residual(rs[k]);
        }
        return 2 * n * std::abs(s);
    };
    return out;
}

double model_residual(const MemorySpec &spec, const LogicalRateModel &model, double r) {
    return logical_error_rate(model, r * spec.p, spec.d) - unclamped_rate(model, r * spec.p, spec.d);
}

std::vector<ScalingRow> scaling_sweep(
    const LogicalRateModel &model,
    const std::vector<double> &ps,
    const std::vector<uint32_t> &ds,
    const std::vector<uint64_t> &Ns,
    const std::vector<uint32_t> &Ks) {
    std::vector<ScalingRow> rows;
    for (double p : ps) {
        for (uint32_t d : ds) {
            for (uint64_t N : Ns) {
                for (uint32_t K : Ks) {
                    MemorySpec spec{N, d, p, K};
                    Projection proj = projected_zne(spec, model);
                    BiasBounds bounds = bias_bounds(spec, model, proj.rs, proj.coeffs);
                    rows.push_back({p, d, N, K, proj.delta_ratio, proj.eta, proj.delta0, bounds.delta_tilde_1});
                }
            }
        }
    }
    return rows;
}

std::string scaling_csv(const std::vector<ScalingRow> &rows) {
    std::ostringstream out;
    out << "p,d,N,K,delta_ratio,eta,delta0,delta_tilde_1\n";
    for (const auto &row : rows) {
        out << format_number(row.p) << "," << row.d << "," << row.N << "," << row.K << ","
            << format_number(row.delta_ratio) << "," << format_number(row.eta) << "," << format_number(row.delta0)
            << "," << format_number(row.delta_tilde_1) << "\n";
    }
    return out.str();
}

}  // namespace ftzne
