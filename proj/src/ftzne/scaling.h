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

#ifndef FTZNE_SCALING_H
#define FTZNE_SCALING_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ftzne {

/// Power-law logical error rate per logical operation,
/// P_L(p, d) = A * (p / p_th)^ceil(d/2), clamped to [0, 0.5].
struct LogicalRateModel {
    double A = 0.03;
    double p_th = 0.0;

    /// A = 0.03 with p_th solved so that P_L(1e-3, 11) = 2e-10.
    static LogicalRateModel calibrated();
    /// Model with prefactor `A` whose rate at (p, d) equals `target`.
    static LogicalRateModel fit(double A, double p, uint32_t d, double target);
};

double logical_error_rate(const LogicalRateModel &model, double p, uint32_t d);

/// Memory circuit of N logical operations at distance d with physical rate p,
/// extrapolated at order K over r_k = k^(1/ceil(d/2)), k = 1..K+1.
struct MemorySpec {
    uint64_t N = 1;
    uint32_t d = 3;
    double p = 1e-3;
    uint32_t K = 1;

    std::vector<double> r_schedule() const;
};

/// [1 - 2 P_L(r p, d)]^N.
double memory_expectation(const MemorySpec &spec, const LogicalRateModel &model, double r);

struct Projection {
    std::vector<double> rs;
    std::vector<double> values;
    std::vector<double> coeffs;
    double mitigated = 0;
    double delta = 0;
    double delta0 = 0;
    double delta_ratio = 0;
    double eta = 0;
};

/// ZNE on the analytic memory curve against the ideal value 1.
Projection projected_zne(const MemorySpec &spec, const LogicalRateModel &model);

/// Analytic bias bounds for a Pauli observable with P_tot(r) = N P_L(r p).
struct BiasBounds {
    double delta_tilde_0 = 0;
    double delta_tilde_1 = 0;
    /// 2 N |sum_k b_k Delta(r_k)| for a per-operation residual Delta(r) of the
    /// polynomial approximation of P_L.
    std::function<double(const std::function<double(double)> &)> delta_tilde_2;
};

BiasBounds bias_bounds(
    const MemorySpec &spec, const LogicalRateModel &model, const std::vector<double> &rs, const std::vector<double> &b);

/// Residual of the order-K polynomial approximation of the clamped model in r:
/// the clamped rate minus its unclamped power law. Zero below the clamp.
double model_residual(const MemorySpec &spec, const LogicalRateModel &model, double r);

struct ScalingRow {
    double p = 0;
    uint32_t d = 0;
    uint64_t N = 0;
    uint32_t K = 0;
    double delta_ratio = 0;
    double eta = 0;
    double delta0 = 0;
    double delta_tilde_1 = 0;
};

std::vector<ScalingRow> scaling_sweep(
    const LogicalRateModel &model,
    const std::vector<double> &ps,
    const std::vector<uint32_t> &ds,
    const std::vector<uint64_t> &Ns,
    const std::vector<uint32_t> &Ks);

/// CSV with header p,d,N,K,delta_ratio,eta,delta0,delta_tilde_1.
std::string scaling_csv(const std::vector<ScalingRow> &rows);

}  // namespace ftzne

#endif
