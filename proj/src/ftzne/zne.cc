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

#include "ftzne/zne.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ftzne/errors.h"
#include "ftzne/format.h"

namespace ftzne {

uint32_t leading_power(uint32_t d) {
    return (d + 1) / 2;
}

std::vector<double> extrap_coeffs(const std::vector<double> &rs, uint32_t d, uint32_t K) {
    if (d < 1) {
        throw DegenerateDesignError("effective distance must be at least 1");
    }
    if (rs.size() != K + 1) {
        throw DegenerateDesignError(
            "order " + std::to_string(K) + " needs " + std::to_string(K + 1) + " noise factors, got " +
            std::to_string(rs.size()));
    }
    for (size_t i = 0; i < rs.size(); i++) {
        if (!(rs[i] > 0) || !std::isfinite(rs[i])) {
            throw DegenerateDesignError("noise factors must be positive and finite");
        }
        for (size_t j = 0; j < i; j++) {
            if (rs[i] == rs[j]) {
                throw DegenerateDesignError("repeated noise factor " + std::to_string(rs[i]));
            }
        }
    }
    size_t n = K + 1;
    uint32_t e = leading_power(d);
    Eigen::MatrixXd V(n, n);
    for (size_t i = 0; i < n; i++) {
        V(i, 0) = 1;
        for (size_t j = 1; j < n; j++) {
            V(i, j) = std::pow(rs[i], double(e + j - 1));
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(V.transpose());
    Eigen::VectorXd b = lu.solve(rhs);
    double residual = (V.transpose() * b - rhs).norm();
    if (!b.allFinite() || residual > 1e-8 * (1 + b.norm())) {
        throw DegenerateDesignError("extrapolation design matrix is singular");
    }
    return {b.data(), b.data() + n};
}

ZneResult extrapolate(const std::vector<DataPoint> &points, uint32_t d, uint32_t K) {
    if (points.empty() || points[0].r != 1.0) {
        throw DegenerateDesignError("extrapolation points must start at r = 1");
    }
    ZneResult result;
    result.d = d;
    result.K = K;
    std::vector<double> values;
    for (const auto &p : points) {
        result.rs.push_back(p.r);
        values.push_back(p.value);
    }
    result.coeffs = extrap_coeffs(result.rs, d, K);
    for (size_t k = 0; k < values.size(); k++) {
        result.value += result.coeffs[k] * values[k];
    }
    result.overhead = sampling_overhead(values, result.coeffs);
    return result;
}

double bias(double value, double ideal) {
    return std::abs(value - ideal);
}

double sampling_overhead(const std::vector<double> &values, const std::vector<double> &b, double n_total) {
    if (values.size() != b.size() || values.empty()) {
        throw std::invalid_argument("values and coefficients differ in length");
    }
    double l1 = 0;
    for (double x : b) {
        l1 += std::abs(x);
    }
    double var_em = 0;
    for (size_t k = 0; k < b.size(); k++) {
        if (b[k] == 0) {
            continue;
        }
        if (std::abs(values[k]) > 1 + 1e-12) {
            throw DomainError("Pauli expectation values must lie in [-1, 1]");
        }
        double n_k = std::abs(b[k]) / l1 * n_total;
        double var_k = std::max(0.0, 1 - values[k] * values[k]) / n_k;
        var_em += b[k] * b[k] * var_k;
    }
    double var_raw = std::max(0.0, 1 - values[0] * values[0]) / n_total;
    if (var_raw == 0) {
        return var_em == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return var_em / var_raw;
}

double measured_sampling_overhead(const std::vector<DataPoint> &points, const std::vector<double> &b) {
    if (points.size() != b.size() || points.empty()) {
        throw std::invalid_argument("points and coefficients differ in length");
    }
    double l1 = 0;
    for (double x : b) {
        l1 += std::abs(x);
    }
    const double n_total = 1e6;
    double var_em = 0;
    for (size_t k = 0; k < b.size(); k++) {
        if (b[k] == 0) {
            continue;
        }
        double per_shot = points[k].std_error * points[k].std_error * double(points[k].shots);
        var_em += b[k] * b[k] * per_shot / (std::abs(b[k]) / l1 * n_total);
    }
    double var_raw = points[0].std_error * points[0].std_error * double(points[0].shots) / n_total;
    if (var_raw == 0) {
        return var_em == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return var_em / var_raw;
}

std::vector<ScanEntry> scan_delta_eta(
    const std::vector<DataPoint> &grid, uint32_t d, const std::vector<uint32_t> &Ks, double ideal) {
    auto base = std::find_if(grid.begin(), grid.end(), [](const DataPoint &p) {
        return p.r == 1.0;
    });
    if (base == grid.end()) {
        throw std::invalid_argument("scan grid must contain r = 1");
    }
    std::vector<DataPoint> others;
    for (const auto &p : grid) {
        if (p.r != 1.0) {
            others.push_back(p);
        }
    }
    double delta0 = bias(base->value, ideal);
    std::vector<ScanEntry> entries;
    for (uint32_t K : Ks) {
        if (K == 0 || K > others.size()) {
            continue;
        }
        std::vector<size_t> pick;
        std::function<void(size_t)> visit = [&](size_t start) {
            if (pick.size() == K) {
                std::vector<DataPoint> pts{*base};
                for (size_t i : pick) {
                    pts.push_back(others[i]);
                }
                ZneResult z = extrapolate(pts, d, K);
                entries.push_back({d, K, z.rs, z.value, bias(z.value, ideal), z.overhead, delta0});
                return;
            }
            for (size_t i = start; i < others.size(); i++) {
                pick.push_back(i);
                visit(i + 1);
                pick.pop_back();
            }
        };
        visit(0);
    }
    return entries;
}

std::string format_r_subset(const std::vector<double> &rs) {
    std::string out;
    for (size_t i = 0; i < rs.size(); i++) {
        out += (i ? ";" : "") + format_number(rs[i]);
    }
    return out;
}

}  // namespace ftzne
