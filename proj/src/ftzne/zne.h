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

#ifndef FTZNE_ZNE_H
#define FTZNE_ZNE_H

#include <cstdint>
#include <string>
#include <vector>

namespace ftzne {

struct DataPoint {
    double r = 1;
    double value = 0;
    double std_error = 0;
    uint64_t shots = 0;
};

struct ZneResult {
    double value = 0;
    std::vector<double> coeffs;
    double bias = 0;
    double overhead = 0;
    uint32_t d = 1;
    uint32_t K = 0;
    std::vector<double> rs;
};

/// Leading power of r in the fitting family: ceil(d/2).
uint32_t leading_power(uint32_t d);

/// Coefficients b_0..b_K such that fitting
///   y(r) = c + sum_{k=e}^{e+K-1} a_k r^k,  e = ceil(d/2),
/// through the points (rs[i], y_i) gives c = sum_i b_i y_i. This is the first
/// row of the inverse of V with V_{i0} = 1 and V_{ij} = rs[i]^(e+j-1), found by
/// solving V^T b = e_0 with partial pivoting. Throws DegenerateDesignError on
/// repeated or non-positive nodes, a size mismatch or a singular design.
std::vector<double> extrap_coeffs(const std::vector<double> &rs, uint32_t d, uint32_t K);

/// Zero-noise value sum_k b_k y_k from K+1 points, the first at r = 1.
ZneResult extrapolate(const std::vector<DataPoint> &points, uint32_t d, uint32_t K);

/// |value - ideal|.
double bias(double value, double ideal);

/// Variance ratio of the mitigated and raw estimators at equal total shots,
/// for a Pauli observable (variance 1 - <O>^2 per shot) with shots split as
/// N_k = |b_k| / sum|b| * n_total. Infinite when the raw variance is zero.
double sampling_overhead(const std::vector<double> &values, const std::vector<double> &b, double n_total = 1e6);

/// Same ratio with per-shot variances taken from measured standard errors,
/// stderr_k^2 * shots_k, instead of the Pauli formula.
double measured_sampling_overhead(const std::vector<DataPoint> &points, const std::vector<double> &b);

struct ScanEntry {
    uint32_t d = 1;
    uint32_t K = 0;
    std::vector<double> rs;  // including r0 = 1
    double value = 0;
    double delta = 0;
    double eta = 0;
    double delta0 = 0;
};

/// For every K in `Ks` and every size-K subset of the grid points other than
/// r = 1, extrapolates with r0 = 1 plus the subset. Subsets are visited in
/// lexicographic order of grid position. Throws std::invalid_argument when the
/// grid has no r = 1 point.
std::vector<ScanEntry> scan_delta_eta(
    const std::vector<DataPoint> &grid, uint32_t d, const std::vector<uint32_t> &Ks, double ideal);

/// "1;1.5;2" style rendering of a node list with 12 significant digits.
std::string format_r_subset(const std::vector<double> &rs);

}  // namespace ftzne

#endif
