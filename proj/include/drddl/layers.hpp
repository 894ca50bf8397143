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

#ifndef DRDDL_LAYERS_HPP
#define DRDDL_LAYERS_HPP

#include <cstdint>
#include <vector>

#include "drddl/activations.hpp"
#include "drddl/parallel.hpp"
#include "drddl/solvers.hpp"
#include "drddl/types.hpp"

namespace drddl {

// Atoms are rescaled to this l2 norm after every dictionary update, with the
// inverse scale folded into the coefficients. Removes the scale ambiguity of
// D Z factorizations.
inline constexpr double kAtomNormCap = 1.0;

// One dictionary level. Columns of D are atoms; `activation` is the map
// applied to this level's synthesis output (identity for the first level,
// which produces the data directly).
struct Layer {
  Mat D;
  Activation activation;

  int in_dim() const { return static_cast<int>(D.rows()); }
  int out_dim() const { return static_cast<int>(D.cols()); }
};

// Split Bregman settings for l1 data-fidelity training. `mu_bregman` is the
// augmented-Lagrangian weight coupling the residual proxy to the residual;
// it is unrelated to the classifier weight in FinalTrainConfig.
struct RobustTrainConfig {
  double mu_bregman = 1.0;
  int outer_iters = 50;
  int inner_iters = 1;  // dictionary/coefficient alternations per outer round
  double tol = 1e-4;    // relative primal-residual stopping threshold
};

struct FinalTrainConfig {
  double lambda = 0.2;  // sparsity weight on the final coefficients
  double mu_cls = 1.0;  // classifier weight (kept at unity by default)
  int iters = 15;       // alternation rounds
  IstaConfig ista_cfg;  // budget for the stacked coefficient updates
};

struct RobustTrainResult {
  Layer layer;
  Mat Z;
  bool converged = false;
  double primal_residual = 0.0;  // ||P - (X - D Z)||_F / ||X||_F at exit
  int iterations = 0;
};

struct DenseTrainResult {
  Layer layer;
  Mat Z;
  std::vector<double> objective_trace;  // ||Y - D Z||_F^2 per round
};

struct FinalTrainResult {
  Layer layer;
  Mat W;
  Mat Z;
  // ||Y - D Z||_F^2 + lambda ||Z||_1 + mu ||T - W Z||_F^2 per round
  std::vector<double> objective_trace;
};

// min_{D,Z} ||X - D Z||_1 by Split Bregman with a proxy P for the residual
// X - D Z and relaxation variable B. X must not be all-zero unless the
// trivial fixed point (initial dictionary, Z = 0) is acceptable; that fixed
// point is what gets returned for X = 0.
RobustTrainResult train_robust_layer(const Mat& x, int out_dim,
                                     const RobustTrainConfig& cfg,
                                     std::uint64_t seed);

// min_{D,Z} ||Y - D Z||_F^2 by alternating exact least squares.
DenseTrainResult train_dense_layer(const Mat& y, int out_dim, int iters,
                                   std::uint64_t seed);

// min_{D,Z,W} ||Y - D Z||_F^2 + lambda ||Z||_1 + mu ||T - W Z||_F^2.
// T is one-hot with every class present. The Z block stacks [Y; sqrt(mu) T]
// over [D; sqrt(mu) W] and solves the l1-regularized system with ISTA.
FinalTrainResult train_final_layer(const Mat& y, int out_dim, const Mat& t,
                                   const FinalTrainConfig& cfg,
                                   std::uint64_t seed);

// Test-time encoders; one column in, one coefficient vector out.
Vec encode_robust(const Layer& layer, const Vec& x, int irls_max_iters = 50,
                  double irls_eps = 1e-6);
Vec encode_dense(const Layer& layer, const Vec& y);
Vec encode_sparse(const Layer& layer, const Vec& y, double lambda);
Vec encode_sparse(const Layer& layer, const Vec& y, const IstaConfig& cfg);

// Batch variants map over columns independently; the parallel path must give
// the same bits as the serial one.
Mat encode_robust_batch(const Layer& layer, const Mat& x,
                        ExecMode mode = ExecMode::kParallel,
                        int irls_max_iters = 50, double irls_eps = 1e-6);
Mat encode_dense_batch(const Layer& layer, const Mat& y,
                       ExecMode mode = ExecMode::kParallel);
Mat encode_sparse_batch(const Layer& layer, const Mat& y,
                        const IstaConfig& cfg,
                        ExecMode mode = ExecMode::kParallel);

}  // namespace drddl

#endif  // DRDDL_LAYERS_HPP
