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

#ifndef DRDDL_NETWORK_HPP
#define DRDDL_NETWORK_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "drddl/layers.hpp"
#include "drddl/parallel.hpp"
#include "drddl/types.hpp"

namespace drddl {

// Per-feature affine map to [0, 1], fitted on the training set and replayed
// at test time. Constant features map to zero.
struct FeatureScaler {
  Vec offset;  // per-feature minimum
  Vec scale;   // 1 / (max - min); 0 for zero-range features

  bool empty() const { return offset.size() == 0; }
  Vec apply(const Vec& x) const;
  Mat apply(const Mat& x) const;
  static FeatureScaler fit(const Mat& x);
};

// Layer stack D_1..D_N, classifier map W, and the hyperparameters needed to
// encode new samples. Layer 1 synthesizes the (scaled) data directly, so its
// activation is identity; deeper layers carry `activation`.
struct DrddlModel {
  std::vector<Layer> layers;
  Mat W;
  double lambda = 0.2;
  double mu_cls = 1.0;
  Activation activation;
  int num_classes = 0;
  int input_dim = 0;
  FeatureScaler scaler;

  int code_dim() const {
    return layers.empty() ? 0 : layers.back().out_dim();
  }
  // Dimension-chain and classifier-shape checks; FormatError names the
  // first offending layer.
  void validate() const;
};

struct TrainSpec {
  std::vector<int> arch;  // layer widths, e.g. {150, 100, 30}
  double lambda = 0.2;
  double mu_cls = 1.0;
  ActivationKind activation = ActivationKind::kTanh;
  RobustTrainConfig robust_cfg;
  int dense_iters = 25;
  int final_iters = 15;
  IstaConfig ista_cfg;  // coding budget for the final layer (lambda ignored)
  std::uint64_t seed = 0;
};

// Solver budgets for test-time encoding.
struct EncodeConfig {
  int ista_max_iters = 500;
  double ista_tol = 1e-10;
  int irls_max_iters = 50;
  double irls_eps = 1e-6;
};

// Greedy layer-by-layer training: robust first layer, Euclidean middle
// layers on the inverse-activated coefficients, sparse + discriminative
// final layer. Labels are 1-based contiguous class ids; every class must
// appear. For a single-width arch the one layer is trained as the final
// (Euclidean-fidelity) layer.
DrddlModel train(const Mat& x, const std::vector<int>& labels,
                 const TrainSpec& spec);

// Precomputes per-layer factorizations so repeated encodes are cheap.
// Const-safe to share across threads.
class Encoder {
 public:
  explicit Encoder(const DrddlModel& model, EncodeConfig cfg = {});
  Vec encode(const Vec& x) const;
  Mat encode_batch(const Mat& x, ExecMode mode = ExecMode::kParallel) const;

 private:
  const DrddlModel& model_;
  EncodeConfig cfg_;
  Mat robust_pinv_;               // pinv of layer 1 (N >= 2)
  std::vector<Mat> dense_pinvs_;  // pinvs of layers 2..N-1
  double final_step_bound_ = 0.0;
};

Vec encode(const DrddlModel& model, const Vec& x, EncodeConfig cfg = {});
Mat encode_batch(const DrddlModel& model, const Mat& x,
                 ExecMode mode = ExecMode::kParallel, EncodeConfig cfg = {});

// scores = W z; returns (1-based class id, scores). Ties break to the
// lowest class index.
std::pair<int, Vec> classify(const DrddlModel& model, const Vec& z);

int predict(const DrddlModel& model, const Vec& x, EncodeConfig cfg = {});
std::vector<int> predict_batch(const DrddlModel& model, const Mat& x,
                               ExecMode mode = ExecMode::kParallel,
                               EncodeConfig cfg = {});

// Binary model file: magic "DRDDL1", structured header, then matrices as
// little-endian float64 in column-major order. Round trips bit-exactly.
void save_model(const DrddlModel& model, const std::filesystem::path& path);
DrddlModel load_model(const std::filesystem::path& path);

}  // namespace drddl

#endif  // DRDDL_NETWORK_HPP
