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

#include "drddl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <Eigen/SVD>

#include "drddl/rng.hpp"

namespace drddl {

double soft_threshold(double x, double tau) {
  const double mag = std::abs(x) - tau;
  if (mag <= 0.0) return 0.0;
  return x < 0.0 ? -mag : mag;
}

Mat soft_threshold(const Mat& m, double tau) {
  return m.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
}

Mat pseudo_inverse(const Mat& a) {
  require_nonempty(a, "pseudo_inverse");
  require_finite(a, "pseudo_inverse");
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("pseudo_inverse: SVD failed to converge");
  }
  const Vec& sigma = svd.singularValues();
  const double cutoff = kPinvCutoff * sigma(0);
  Vec inv = Vec::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat least_squares(const Mat& a, const Mat& y) {
  require_nonempty(a, "least_squares");
  require_finite(a, "least_squares");
  require_finite(y, "least_squares");
  if (a.rows() != y.rows()) {
    throw DegenerateInput("least_squares: row mismatch between A and Y");
  }
  if ((a.array() == 0.0).all()) {
    throw DegenerateInput("least_squares: A is all-zero");
  }
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("least_squares: SVD failed to converge");
  }
  const Vec& sigma = svd.singularValues();
  const double cutoff = kPinvCutoff * sigma(0);
  Vec inv = Vec::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  Mat z = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * y));
  require_finite(z, "least_squares");
  return z;
}

Mat least_squares_rhs(const Mat& y, const Mat& z) {
  // min_D ||Y - D Z||_F^2  ==  min_D ||Y^T - Z^T D^T||_F^2
  return least_squares(z.transpose(), y.transpose()).transpose();
}

double spectral_norm_sq(const Mat& a, bool* converged) {
  require_nonempty(a, "spectral_norm_sq");
  require_finite(a, "spectral_norm_sq");
  if ((a.array() == 0.0).all()) {
    throw DegenerateInput("spectral_norm_sq: A is all-zero");
  }

  // Power-iterate the smaller Gram matrix.
  const bool use_cols = a.cols() <= a.rows();
  const Mat g = use_cols ? Mat(a.transpose() * a) : Mat(a * a.transpose());
  const Eigen::Index n = g.rows();

  constexpr int kMaxIters = 200;
  constexpr double kRelTol = 1e-9;

  Rng rng(0x9e3779b97f4a7c15ULL);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
  v.normalize();

  double lambda = 0.0;
  bool ok = false;
  for (int it = 0; it < kMaxIters; ++it) {
    Vec gv = g * v;
    const double norm = gv.norm();
    if (norm == 0.0) {
      // v landed in the null space; restart from a fresh direction.
      for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
      v.normalize();
      continue;
    }
    v = gv / norm;
    const double next = v.dot(g * v);
    if (it > 0 && std::abs(next - lambda) <= kRelTol * std::max(next, 1e-300)) {
      lambda = next;
      ok = true;
      break;
    }
    lambda = next;
  }

  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw NumericalError("spectral_norm_sq: power iteration diverged");
  }
  if (converged != nullptr) {
    *converged = ok;
  } else if (!ok) {
    throw NumericalError(
        "spectral_norm_sq: power iteration did not reach tolerance");
  }
  return lambda;
}

std::pair<Mat, SolveReport> ista(const Mat& d, const Mat& y,
                                 const IstaConfig& cfg, const Mat* z0,
                                 double step_bound) {
  require_nonempty(d, "ista");
  require_finite(d, "ista");
  require_finite(y, "ista");
  if (cfg.lambda < 0.0) throw DegenerateInput("ista: lambda < 0");
  if (cfg.max_iters < 1) throw DegenerateInput("ista: max_iters < 1");
  if (cfg.tol < 0.0) throw DegenerateInput("ista: tol < 0");
  if (d.rows() != y.rows()) {
    throw DegenerateInput("ista: row mismatch between D and Y");
  }

  double l = step_bound > 0.0 ? step_bound : 2.0 * spectral_norm_sq(d);
  l += 1e-6 * l;  // slack for strict majorization under inexact sigma_max
  const double tau = cfg.lambda / (2.0 * l);

  Mat z;
  if (z0 != nullptr) {
    if (z0->rows() != d.cols() || z0->cols() != y.cols()) {
      throw DegenerateInput("ista: Z0 shape mismatch");
    }
    z = *z0;
  } else {
    z = Mat::Zero(d.cols(), y.cols());
  }

  const Mat dt = d.transpose();
  Mat resid = y - d * z;
  double obj = resid.squaredNorm() + cfg.lambda * z.lpNorm<1>();

  SolveReport report;
  report.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  report.objective_trace.push_back(obj);

  for (int it = 0; it < cfg.max_iters; ++it) {
    z = soft_threshold(Mat(z + (dt * resid) / l), tau);
    resid = y - d * z;
    const double next = resid.squaredNorm() + cfg.lambda * z.lpNorm<1>();
    if (!std::isfinite(next)) {
      throw NumericalError("ista: non-finite objective");
    }
    report.objective_trace.push_back(next);
    ++report.iterations;
    if (std::abs(next - obj) / std::max(obj, 1e-12) < cfg.tol) {
      obj = next;
      report.converged = true;
      break;
    }
    obj = next;
  }
  require_finite(z, "ista");
  return {std::move(z), std::move(report)};
}

Vec irls_l1(const Mat& d, const Vec& y, int max_iters, double eps,
            const Mat* pinv_d) {
  require_nonempty(d, "irls_l1");
  require_finite(d, "irls_l1");
  if (!y.allFinite()) throw NumericalError("irls_l1: non-finite y");
  if (d.rows() != y.size()) {
    throw DegenerateInput("irls_l1: dimension mismatch between D and y");
  }
  if (max_iters < 1) throw DegenerateInput("irls_l1: max_iters < 1");
  if (eps <= 0.0) throw DegenerateInput("irls_l1: eps <= 0");
  if (d.rows() < d.cols()) {
    std::cerr << "irls_l1: underdetermined system (" << d.rows() << " < "
              << d.cols() << "), solution may not be unique\n";
  }

  Vec z = pinv_d != nullptr ? Vec((*pinv_d) * y)
                            : Vec(pseudo_inverse(d) * y);
  double obj = (y - d * z).lpNorm<1>();

  const Mat dt = d.transpose();
  for (int it = 0; it < max_iters; ++it) {
    const Vec resid = y - d * z;
    Vec w(resid.size());
    for (Eigen::Index i = 0; i < resid.size(); ++i) {
      w(i) = 1.0 / std::max(std::abs(resid(i)), eps);
    }
    Mat lhs = dt * w.asDiagonal() * d;
    lhs.diagonal().array() += eps;
    const Vec rhs = dt * (w.asDiagonal() * y);
    Eigen::LDLT<Mat> ldlt(lhs);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("irls_l1: weighted normal system not solvable");
    }
    const Vec z_next = ldlt.solve(rhs);
    if (!z_next.allFinite()) {
      throw NumericalError("irls_l1: non-finite iterate");
    }
    const double obj_next = (y - d * z_next).lpNorm<1>();
    if (obj_next > obj) {
      break;  // at the numerical floor of the majorization step
    }
    const double rel = (z_next - z).norm() / std::max(z.norm(), 1e-12);
    z = z_next;
    obj = obj_next;
    if (rel < 1e-8) break;
  }
  return z;
}

}  // namespace drddl
