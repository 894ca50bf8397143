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

#ifndef DRDDL_METRICS_HPP
#define DRDDL_METRICS_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "drddl/types.hpp"

namespace drddl {

// counts(i, j) = samples of true class i+1 predicted as class j+1.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  int num_classes() const { return static_cast<int>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

// Single pass over 1-based label vectors.
ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& pred, int num_classes);

// Overall accuracy: trace / total.
double oa(const ConfusionMatrix& cm);

// Average accuracy: mean per-class recall; classes with zero true count are
// excluded from the mean.
double aa(const ConfusionMatrix& cm);

// Cohen's kappa: (p_o - p_e) / (1 - p_e) with p_e from the marginals.
// Returns 1 when all mass sits in one agreed cell (p_o = p_e = 1).
double kappa(const ConfusionMatrix& cm);

// One metric per line: "oa <v>\naa <v>\nkappa <v>\n".
void write_metrics_text(const ConfusionMatrix& cm, std::ostream& os);
// Machine-readable: header "metric,value" plus one row per metric.
void write_metrics_csv(const ConfusionMatrix& cm, std::ostream& os);
// Raw counts, one row of comma-separated integers per true class.
void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& os);

}  // namespace drddl

#endif  // DRDDL_METRICS_HPP
