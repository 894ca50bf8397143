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

#ifndef DRDDL_ACTIVATIONS_HPP
#define DRDDL_ACTIVATIONS_HPP

#include <cstdint>
#include <string>

#include "drddl/types.hpp"

namespace drddl {

enum class ActivationKind { kIdentity, kTanh, kSigmoid };

// Invertible elementwise nonlinearity. The inverse is made total by clamping
// its argument into the open range of the forward map:
//   Tanh    -> [-1 + clamp_eps, 1 - clamp_eps], then atanh
//   Sigmoid -> [clamp_eps, 1 - clamp_eps], then logit
//   Identity is a pass-through both ways.
struct Activation {
  ActivationKind kind = ActivationKind::kTanh;
  double clamp_eps = 1e-6;  // must lie in (0, 0.1)
};

Mat apply(const Activation& a, const Mat& m);

// Clamped inverse. When `clamped` is non-null it receives the number of
// entries that had to be clamped (useful as a diagnostic: coefficients are
// not guaranteed to sit inside the forward map's range).
Mat apply_inverse(const Activation& a, const Mat& m,
                  std::int64_t* clamped = nullptr);

ActivationKind activation_kind_from_string(const std::string& name);
std::string to_string(ActivationKind kind);

}  // namespace drddl

#endif  // DRDDL_ACTIVATIONS_HPP
