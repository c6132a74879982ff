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

#ifndef FTZNE_ERRORS_H
#define FTZNE_ERRORS_H

#include <stdexcept>
#include <string>

namespace ftzne {

/// Operands defined over different qubit counts.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a hard resource bound (state-vector size, enumeration
/// budget, matcher defect count). Never silently approximated.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid probability, scale factor, or other out-of-domain numeric input.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Post-selection rejected every shot, so no conditional estimate exists.
struct StarvationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A single fault fires more than two detectors and cannot be split into
/// matchable parts.
struct HyperedgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Extrapolation nodes are duplicated or the design matrix is singular.
struct DegenerateDesignError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A result table is missing shots that the estimator requires.
struct IncompleteDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An experiment configuration is malformed or names an unknown field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace ftzne

#endif
