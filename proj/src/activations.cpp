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

#include "drddl/activations.hpp"

#include <cmath>

namespace drddl {

namespace {

void check_clamp_eps(const Activation& a) {
  if (!(a.clamp_eps > 0.0 && a.clamp_eps < 0.1)) {
    throw DegenerateInput("activation: clamp_eps outside (0, 0.1)");
  }
}

}  // namespace

Mat apply(const Activation& a, const Mat& m) {
  require_finite(m, "activation apply");
  switch (a.kind) {
    case ActivationKind::kIdentity:
      return m;
    case ActivationKind::kTanh:
      return m.array().tanh().matrix();
    case ActivationKind::kSigmoid:
      return (1.0 / (1.0 + (-m.array()).exp())).matrix();
  }
  throw DegenerateInput("activation apply: unknown kind");
}

Mat apply_inverse(const Activation& a, const Mat& m, std::int64_t* clamped) {
  require_finite(m, "activation apply_inverse");
  check_clamp_eps(a);
  std::int64_t count = 0;
  Mat out;
  switch (a.kind) {
    case ActivationKind::kIdentity:
      out = m;
      break;
    case ActivationKind::kTanh: {
      const double lo = -1.0 + a.clamp_eps;
      const double hi = 1.0 - a.clamp_eps;
      out = m.unaryExpr([&](double x) {
        double c = x;
        if (c < lo) {
          c = lo;
          ++count;
        } else if (c > hi) {
          c = hi;
          ++count;
        }
        return std::atanh(c);
      });
      break;
    }
    case ActivationKind::kSigmoid: {
      const double lo = a.clamp_eps;
      const double hi = 1.0 - a.clamp_eps;
      out = m.unaryExpr([&](double x) {
        double c = x;
        if (c < lo) {
          c = lo;
          ++count;
        } else if (c > hi) {
          c = hi;
          ++count;
        }
        return std::log(c / (1.0 - c));
      });
      break;
    }
  }
  if (clamped != nullptr) *clamped = count;
  return out;
}

ActivationKind activation_kind_from_string(const std::string& name) {
  if (name == "identity") return ActivationKind::kIdentity;
  if (name == "tanh") return ActivationKind::kTanh;
  if (name == "sigmoid") return ActivationKind::kSigmoid;
  throw ConfigError("unknown activation: " + name);
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kIdentity:
      return "identity";
    case ActivationKind::kTanh:
      return "tanh";
    case ActivationKind::kSigmoid:
      return "sigmoid";
  }
  return "unknown";
}

}  // namespace drddl
