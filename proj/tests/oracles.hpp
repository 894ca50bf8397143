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
//
// Reference solvers for tests. Everything here is deliberately independent
// of the library's solver paths: coordinate descent instead of proximal
// gradient, normal equations instead of SVD, grid search instead of IRLS,
// an SVD route instead of the covariance eigensolver.

#ifndef DRDDL_TESTS_ORACLES_HPP
#define DRDDL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "drddl/rng.hpp"
#include "drddl/types.hpp"

namespace drddl::oracles {

inline double lasso_objective(const Mat& d, const Mat& y, const Mat& z,
                              double lambda) {
  return (y - d * z).squaredNorm() + lambda * z.lpNorm<1>();
}

// Cyclic coordinate descent for min_z ||y - D z||_2^2 + lambda ||z||_1,
// run to a tight objective tolerance.
inline Vec cd_lasso(const Mat& d, const Vec& y, double lambda,
                    int max_sweeps = 20000, double tol = 1e-13) {
  const Eigen::Index k = d.cols();
  Vec z = Vec::Zero(k);
  Vec r = y;
  Vec col_sq(k);
  for (Eigen::Index j = 0; j < k; ++j) col_sq(j) = d.col(j).squaredNorm();

  double prev = lasso_objective(d, y, z, lambda);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double rho = d.col(j).dot(r) + col_sq(j) * z(j);
      const double mag = std::abs(rho) - lambda / 2.0;
      const double znew =
          mag <= 0.0 ? 0.0 : (rho < 0.0 ? -mag : mag) / col_sq(j);
      if (znew != z(j)) {
        r += d.col(j) * (z(j) - znew);
        z(j) = znew;
      }
    }
    const double cur = lasso_objective(d, y, z, lambda);
    if (std::abs(prev - cur) <= tol * std::max(1.0, std::abs(prev))) break;
    prev = cur;
  }
  return z;
}

// Plain normal-equations least squares (A^T A) z = A^T y via pivoted LU.
inline Mat normal_eq_ls(const Mat& a, const Mat& y) {
  const Mat gram = a.transpose() * a;
  return gram.fullPivLu().solve(a.transpose() * y);
}

// Brute-force 1-D minimizer of ||y - d z||_1 over a refining grid.
inline double grid_l1_1d(const Mat& d, const Vec& y, double lo, double hi,
                         int coarse = 2001, int refinements = 4) {
  double best_z = lo;
  double best_f = std::numeric_limits<double>::infinity();
  for (int round = 0; round < refinements; ++round) {
    const double step = (hi - lo) / (coarse - 1);
    for (int i = 0; i < coarse; ++i) {
      const double z = lo + i * step;
      const double f = (y - d.col(0) * z).lpNorm<1>();
      if (f < best_f) {
        best_f = f;
        best_z = z;
      }
    }
    lo = best_z - step;
    hi = best_z + step;
  }
  return best_z;
}

// Brute-force 2-D minimizer of ||y - D z||_1, coarse grid plus refinement.
inline Vec grid_l1_2d(const Mat& d, const Vec& y, double lo, double hi,
                      int coarse = 201, int refinements = 5) {
  Vec best = Vec::Zero(2);
  double best_f = std::numeric_limits<double>::infinity();
  double lo0 = lo, hi0 = hi, lo1 = lo, hi1 = hi;
  for (int round = 0; round < refinements; ++round) {
    const double s0 = (hi0 - lo0) / (coarse - 1);
    const double s1 = (hi1 - lo1) / (coarse - 1);
    for (int i = 0; i < coarse; ++i) {
      for (int j = 0; j < coarse; ++j) {
        Vec z(2);
        z << lo0 + i * s0, lo1 + j * s1;
        const double f = (y - d * z).lpNorm<1>();
        if (f < best_f) {
          best_f = f;
          best = z;
        }
      }
    }
    lo0 = best(0) - s0;
    hi0 = best(0) + s0;
    lo1 = best(1) - s1;
    hi1 = best(1) + s1;
  }
  return best;
}

// Principal directions via thin SVD of the centered data matrix (left
// singular vectors), with the same sign convention as the library.
inline Mat pca_svd_oracle(const Mat& x, int k) {
  const Vec mean = x.rowwise().mean();
  const Mat centered = x.colwise() - mean;
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeThinU);
  Mat proj(k, x.rows());
  for (int i = 0; i < k; ++i) {
    Vec v = svd.matrixU().col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    proj.row(i) = v.transpose();
  }
  return proj;
}

inline Mat seeded_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_matrix(rows, cols, rng);
}

}  // namespace drddl::oracles

#endif  // DRDDL_TESTS_ORACLES_HPP
