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

#include "drddl/metrics.hpp"

#include <iomanip>
#include <string>

namespace drddl {

ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& pred, int num_classes) {
  if (num_classes < 1) throw DegenerateInput("confusion: num_classes < 1");
  if (truth.size() != pred.size()) {
    throw DegenerateInput("confusion: label vector length mismatch");
  }
  ConfusionMatrix cm;
  cm.counts.setZero(num_classes, num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = pred[i];
    if (t < 1 || t > num_classes || p < 1 || p > num_classes) {
      throw DegenerateInput("confusion: label outside 1.." +
                            std::to_string(num_classes) + " at sample " +
                            std::to_string(i));
    }
    ++cm.counts(t - 1, p - 1);
  }
  return cm;
}

double oa(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total <= 0) throw DegenerateInput("oa: empty confusion matrix");
  return static_cast<double>(cm.counts.trace()) /
         static_cast<double>(total);
}

double aa(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw DegenerateInput("aa: empty confusion matrix");
  double sum = 0.0;
  int present = 0;
  for (int i = 0; i < cm.num_classes(); ++i) {
    const std::int64_t row = cm.counts.row(i).sum();
    if (row == 0) continue;
    sum += static_cast<double>(cm.counts(i, i)) / static_cast<double>(row);
    ++present;
  }
  if (present == 0) throw DegenerateInput("aa: no class has samples");
  return sum / static_cast<double>(present);
}

double kappa(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total <= 0) throw DegenerateInput("kappa: empty confusion matrix");

  std::int64_t diag = 0;
  std::int64_t marg = 0;  // sum_i row_i * col_i
  for (int i = 0; i < cm.num_classes(); ++i) {
    diag += cm.counts(i, i);
    marg += cm.counts.row(i).sum() * cm.counts.col(i).sum();
  }
  // Exact integer test for the chance-agreement degeneracy p_e = 1.
  if (marg == total * total) {
    if (diag == total) return 1.0;
    throw DegenerateInput("kappa: undefined (chance agreement is 1)");
  }
  const double p_o = static_cast<double>(diag) / static_cast<double>(total);
  const double p_e = static_cast<double>(marg) /
                     (static_cast<double>(total) * static_cast<double>(total));
  return (p_o - p_e) / (1.0 - p_e);
}

void write_metrics_text(const ConfusionMatrix& cm, std::ostream& os) {
  os << std::setprecision(17);
  os << "oa " << oa(cm) << "\n";
  os << "aa " << aa(cm) << "\n";
  os << "kappa " << kappa(cm) << "\n";
}

void write_metrics_csv(const ConfusionMatrix& cm, std::ostream& os) {
  os << std::setprecision(17);
  os << "metric,value\n";
  os << "oa," << oa(cm) << "\n";
  os << "aa," << aa(cm) << "\n";
  os << "kappa," << kappa(cm) << "\n";
}

void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& os) {
  for (int i = 0; i < cm.num_classes(); ++i) {
    for (int j = 0; j < cm.num_classes(); ++j) {
      if (j > 0) os << ',';
      os << cm.counts(i, j);
    }
    os << '\n';
  }
}

}  // namespace drddl
