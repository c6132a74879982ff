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

#ifndef FTZNE_SIM_H
#define FTZNE_SIM_H

#include <cstdint>
#include <vector>

#include "ftzne/circuit.h"
#include "ftzne/executor.h"
#include "ftzne/frame.h"
#include "ftzne/noise.h"

namespace ftzne {

/// (-1)^(parity of the listed records), negated when requested.
ObservableFn parity_observable(const ParityObservable &spec);

/// One Monte Carlo shot under every channel bound by `m`, simulated on the
/// state vector. Deterministic given `seed`.
ShotOutcome run_shot(const Circuit &c, const NoiseModel &m, uint64_t seed);

enum class SimMethod { Auto, StateVector, Frame };

struct RawEstimate {
    double mean = 0;
    double std_error = 0;
    double acceptance_rate = 0;
    uint64_t accepted = 0;
};

/// Mean and standard error of `obs` over accepted shots. Auto uses the Pauli
/// frame whenever every fault propagates through Clifford operations only.
/// Throws StarvationError when no shot is accepted.
RawEstimate estimate_raw(
    const Circuit &c,
    const NoiseModel &m,
    const ObservableFn &obs,
    uint64_t shots,
    uint64_t seed,
    SimMethod method = SimMethod::Auto);

struct ExactOptions {
    uint64_t budget = kDefaultBranchBudget;
    SimMethod method = SimMethod::Auto;
};

/// Exact <obs> conditioned on post-selection, by enumeration of measurement
/// branches and fault configurations. Throws CapacityError beyond the budget
/// and StarvationError when the accepted probability is zero.
double exact_expectation(const Circuit &c, const NoiseModel &m, const ObservableFn &obs, ExactOptions options = {});

/// <O>(r) for the model scaled by r, as a ratio of polynomials in r: the
/// unnormalised accepted expectation over the accepted probability. Without
/// post-selection the denominator is exactly 1 and `coeffs` is the expansion
/// of <O>(r) itself.
struct ExpectationPolynomial {
    std::vector<double> coeffs;         // a_0 .. a_N
    std::vector<double> normalization;  // acceptance probability, same degree
    size_t n_locations = 0;

    double evaluate(double r) const;
    /// Index of the highest coefficient with magnitude above `tol`.
    size_t degree(double tol = 0) const;
};

/// Expands <O>(r) exactly in r. Under InjectionOnly the operation channels of
/// `m` are dropped before expansion. Requires at most 20 noisy locations.
ExpectationPolynomial expectation_polynomial(
    const Circuit &c,
    const NoiseModel &m,
    const ObservableFn &obs,
    LocationPolicy policy,
    ExactOptions options = {});

/// Evaluates a polynomial with coefficients in increasing degree.
double polyval(const std::vector<double> &coeffs, double x);

}  // namespace ftzne

#endif
