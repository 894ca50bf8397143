// Copyright 2026 the drddl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRDDL_TYPES_HPP
#define DRDDL_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace drddl {

// Dense real matrices, column-major: one sample / coefficient vector per
// column throughout the library.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver produced or received non-finite values, or an iterative method
// failed to reach its required tolerance.
struct NumericalError : Error {
  using Error::Error;
};

// Inputs violate a documented precondition (empty data, missing class, ...).
struct DegenerateInput : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// A file parsed but its contents are not what the format promises.
struct FormatError : Error {
  using Error::Error;
};

// Run configuration rejected before any compute happens.
struct ConfigError : Error {
  using Error::Error;
};

inline void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) {
    throw NumericalError(what + ": non-finite matrix entries");
  }
}

inline void require_nonempty(const Mat& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DegenerateInput(what + ": empty matrix");
  }
}

}  // namespace drddl

#endif  // DRDDL_TYPES_HPP
