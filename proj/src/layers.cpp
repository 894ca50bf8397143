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

#include "drddl/layers.hpp"

#include <cmath>
#include <iostream>
#include <utility>

#include "drddl/rng.hpp"

namespace drddl {

namespace {

// Seeded Gaussian dictionary, columns normalized to unit l2 norm.
Mat init_dictionary(int in_dim, int out_dim, std::uint64_t seed) {
  Rng rng(seed);
  Mat d = gaussian_matrix(in_dim, out_dim, rng);
  for (int j = 0; j < out_dim; ++j) {
    const double n = d.col(j).norm();
    if (n > 0.0) d.col(j) /= n;
  }
  return d;
}

// Rescale atoms to kAtomNormCap, folding the inverse scale into the matching
// coefficient rows (and, when given, the matching classifier columns) so
// D Z and W Z are unchanged. Zero atoms are left alone.
void normalize_atoms(Mat& d, Mat& z, Mat* w = nullptr) {
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double n = d.col(j).norm();
    if (n > 1e-300) {
      const double s = n / kAtomNormCap;
      d.col(j) /= s;
      z.row(j) *= s;
      if (w != nullptr) w->col(j) /= s;
    }
  }
}

void check_train_inputs(const Mat& data, int out_dim, const char* op) {
  require_nonempty(data, op);
  require_finite(data, op);
  if (out_dim < 1) {
    throw DegenerateInput(std::string(op) + ": out_dim < 1");
  }
  if (out_dim > data.rows()) {
    throw DegenerateInput(std::string(op) +
                          ": out_dim exceeds input dimension");
  }
  if (data.cols() < out_dim) {
    std::cerr << op << ": fewer samples (" << data.cols() << ") than atoms ("
              << out_dim << ")\n";
  }
}

}  // namespace

RobustTrainResult train_robust_layer(const Mat& x, int out_dim,
                                     const RobustTrainConfig& cfg,
                                     std::uint64_t seed) {
  check_train_inputs(x, out_dim, "train_robust_layer");
  if (cfg.mu_bregman <= 0.0) {
    throw DegenerateInput("train_robust_layer: mu_bregman <= 0");
  }

  RobustTrainResult result;
  result.layer.D = init_dictionary(static_cast<int>(x.rows()), out_dim, seed);
  result.layer.activation = Activation{ActivationKind::kIdentity, 1e-6};

  const double x_norm = x.norm();
  if (x_norm == 0.0) {
    // Trivial fixed point: the initial dictionary with zero coefficients
    // reproduces X exactly, so there is nothing to iterate on.
    result.Z = Mat::Zero(out_dim, x.cols());
    result.converged = true;
    return result;
  }

  Mat& d = result.layer.D;
  Mat z = least_squares(d, x);
  Mat b = Mat::Zero(x.rows(), x.cols());
  Mat p = Mat::Zero(x.rows(), x.cols());
  const double shrink = 1.0 / (2.0 * cfg.mu_bregman);

  for (int it = 0; it < cfg.outer_iters; ++it) {
    Mat resid = x - d * z;
    p = soft_threshold(Mat(resid + b), shrink);
    const Mat target = x + b - p;
    for (int inner = 0; inner < std::max(cfg.inner_iters, 1); ++inner) {
      d = least_squares_rhs(target, z);
      normalize_atoms(d, z);
      z = least_squares(d, target);
    }
    resid = x - d * z;
    b += resid - p;
    if (!b.allFinite() || !z.allFinite() || !d.allFinite()) {
      throw NumericalError("train_robust_layer: non-finite iterate");
    }
    ++result.iterations;
    result.primal_residual = (p - resid).norm() / x_norm;
    if (result.primal_residual < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.Z = std::move(z);
  return result;
}

DenseTrainResult train_dense_layer(const Mat& y, int out_dim, int iters,
                                   std::uint64_t seed) {
  check_train_inputs(y, out_dim, "train_dense_layer");
  if (iters < 1) throw DegenerateInput("train_dense_layer: iters < 1");
  if ((y.array() == 0.0).all()) {
    throw DegenerateInput("train_dense_layer: input is all-zero");
  }

  DenseTrainResult result;
  result.layer.D = init_dictionary(static_cast<int>(y.rows()), out_dim, seed);
  result.layer.activation = Activation{ActivationKind::kIdentity, 1e-6};
  Mat& d = result.layer.D;
  Mat z;

  result.objective_trace.reserve(static_cast<std::size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    z = least_squares(d, y);
    d = least_squares_rhs(y, z);
    normalize_atoms(d, z);
    const double obj = (y - d * z).squaredNorm();
    if (!std::isfinite(obj)) {
      throw NumericalError("train_dense_layer: non-finite objective");
    }
    result.objective_trace.push_back(obj);
  }
  result.Z = std::move(z);
  return result;
}

FinalTrainResult train_final_layer(const Mat& y, int out_dim, const Mat& t,
                                   const FinalTrainConfig& cfg,
                                   std::uint64_t seed) {
  check_train_inputs(y, out_dim, "train_final_layer");
  require_nonempty(t, "train_final_layer targets");
  require_finite(t, "train_final_layer targets");
  if (cfg.lambda < 0.0) throw DegenerateInput("train_final_layer: lambda < 0");
  if (cfg.mu_cls <= 0.0) throw DegenerateInput("train_final_layer: mu <= 0");
  if (cfg.iters < 1) throw DegenerateInput("train_final_layer: iters < 1");
  if (t.cols() != y.cols()) {
    throw DegenerateInput("train_final_layer: T column count mismatch");
  }
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    int ones = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const double v = t(i, j);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw DegenerateInput("train_final_layer: T is not a 0/1 matrix");
      }
    }
    if (ones != 1) {
      throw DegenerateInput("train_final_layer: T column is not one-hot");
    }
  }
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    if (t.row(i).sum() == 0.0) {
      throw DegenerateInput("train_final_layer: class " +
                            std::to_string(i + 1) + " absent from targets");
    }
  }

  FinalTrainResult result;
  result.layer.D = init_dictionary(static_cast<int>(y.rows()), out_dim, seed);
  result.layer.activation = Activation{ActivationKind::kIdentity, 1e-6};
  Mat& d = result.layer.D;

  Mat z = least_squares(d, y);
  Mat w = least_squares_rhs(t, z);
  const double sqrt_mu = std::sqrt(cfg.mu_cls);

  IstaConfig ista_cfg = cfg.ista_cfg;
  ista_cfg.lambda = cfg.lambda;

  const auto objective = [&]() {
    return (y - d * z).squaredNorm() + cfg.lambda * z.lpNorm<1>() +
           cfg.mu_cls * (t - w * z).squaredNorm();
  };

  result.objective_trace.reserve(static_cast<std::size_t>(cfg.iters));
  for (int it = 0; it < cfg.iters; ++it) {
    // Coefficients: l1-regularized LS on the stacked system, warm-started.
    Mat stacked_d(d.rows() + w.rows(), d.cols());
    stacked_d << d, sqrt_mu * w;
    Mat stacked_y(y.rows() + t.rows(), y.cols());
    stacked_y << y, sqrt_mu * t;
    z = ista(stacked_d, stacked_y, ista_cfg, &z).first;

    d = least_squares_rhs(y, z);
    normalize_atoms(d, z, &w);
    w = least_squares_rhs(t, z);

    const double obj = objective();
    if (!std::isfinite(obj)) {
      throw NumericalError("train_final_layer: non-finite objective");
    }
    result.objective_trace.push_back(obj);
  }
  result.W = std::move(w);
  result.Z = std::move(z);
  return result;
}

Vec encode_robust(const Layer& layer, const Vec& x, int irls_max_iters,
                  double irls_eps) {
  if (x.size() != layer.D.rows()) {
    throw DegenerateInput("encode_robust: input length mismatch");
  }
  if ((x.array() == 0.0).all()) {
    return Vec::Zero(layer.D.cols());
  }
  return irls_l1(layer.D, x, irls_max_iters, irls_eps);
}

Vec encode_dense(const Layer& layer, const Vec& y) {
  if (y.size() != layer.D.rows()) {
    throw DegenerateInput("encode_dense: input length mismatch");
  }
  return pseudo_inverse(layer.D) * y;
}

Vec encode_sparse(const Layer& layer, const Vec& y, double lambda) {
  IstaConfig cfg;
  cfg.lambda = lambda;
  return encode_sparse(layer, y, cfg);
}

Vec encode_sparse(const Layer& layer, const Vec& y, const IstaConfig& cfg) {
  if (y.size() != layer.D.rows()) {
    throw DegenerateInput("encode_sparse: input length mismatch");
  }
  return ista(layer.D, y, cfg).first.col(0);
}

Mat encode_robust_batch(const Layer& layer, const Mat& x, ExecMode mode,
                        int irls_max_iters, double irls_eps) {
  if (x.rows() != layer.D.rows()) {
    throw DegenerateInput("encode_robust_batch: input dimension mismatch");
  }
  const Mat pinv = pseudo_inverse(layer.D);
  Mat z(layer.D.cols(), x.cols());
  parallel_for(x.cols(), mode, [&](std::int64_t j) {
    if ((x.col(j).array() == 0.0).all()) {
      z.col(j).setZero();
    } else {
      z.col(j) = irls_l1(layer.D, x.col(j), irls_max_iters, irls_eps, &pinv);
    }
  });
  return z;
}

Mat encode_dense_batch(const Layer& layer, const Mat& y, ExecMode mode) {
  if (y.rows() != layer.D.rows()) {
    throw DegenerateInput("encode_dense_batch: input dimension mismatch");
  }
  // One pseudo-inverse shared by all columns; each column is then the same
  // matrix-vector product a single encode would compute.
  const Mat pinv = pseudo_inverse(layer.D);
  Mat z(layer.D.cols(), y.cols());
  parallel_for(y.cols(), mode,
               [&](std::int64_t j) { z.col(j) = pinv * y.col(j); });
  return z;
}

Mat encode_sparse_batch(const Layer& layer, const Mat& y,
                        const IstaConfig& cfg, ExecMode mode) {
  if (y.rows() != layer.D.rows()) {
    throw DegenerateInput("encode_sparse_batch: input dimension mismatch");
  }
  const double step_bound = 2.0 * spectral_norm_sq(layer.D);
  Mat z(layer.D.cols(), y.cols());
  parallel_for(y.cols(), mode, [&](std::int64_t j) {
    z.col(j) = ista(layer.D, y.col(j), cfg, nullptr, step_bound).first.col(0);
  });
  return z;
}

}  // namespace drddl
