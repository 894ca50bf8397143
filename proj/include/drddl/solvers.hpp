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

#ifndef DRDDL_SOLVERS_HPP
#define DRDDL_SOLVERS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "drddl/types.hpp"

namespace drddl {

// Singular values below kPinvCutoff * sigma_max are treated as zero when
// forming pseudo-inverses.
inline constexpr double kPinvCutoff = 1e-10;

struct IstaConfig {
  double lambda = 0.0;  // l1 weight, >= 0
  int max_iters = 500;
  double tol = 1e-10;  // relative objective-change stopping threshold
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> objective_trace;  // objective value per iteration
  bool converged = false;
};

// sign(x) * max(|x| - tau, 0)
double soft_threshold(double x, double tau);
Mat soft_threshold(const Mat& m, double tau);

// Moore-Penrose pseudo-inverse via SVD with the kPinvCutoff rank cutoff.
Mat pseudo_inverse(const Mat& a);

// Minimum-norm Z minimizing ||Y - A Z||_F^2.
Mat least_squares(const Mat& a, const Mat& y);

// Left-factor companion for dictionary updates: D = Y * pinv(Z) minimizing
// ||Y - D Z||_F^2 over D.
Mat least_squares_rhs(const Mat& y, const Mat& z);

// sigma_max(A)^2 by power iteration on A^T A (or A A^T, whichever is
// smaller). If `converged` is null a failure to reach tolerance within the
// iteration cap throws NumericalError; otherwise the best estimate is
// returned and the flag records the outcome.
double spectral_norm_sq(const Mat& a, bool* converged = nullptr);

// Iterative soft thresholding for
//   min_Z ||Y - D Z||_F^2 + lambda ||Z||_1
// (no 1/2 on the data term; the threshold is lambda / (2 L) accordingly).
// Z0 null means all-zeros start. `step_bound` optionally supplies a
// precomputed 2 * sigma_max(D)^2 so batch callers can reuse it; pass <= 0
// to compute it here.
std::pair<Mat, SolveReport> ista(const Mat& d, const Mat& y,
                                 const IstaConfig& cfg, const Mat* z0 = nullptr,
                                 double step_bound = 0.0);

// Least absolute deviations min_z ||y - D z||_1 via iteratively reweighted
// least squares: weights 1 / max(|r_i|, eps), plus an eps ridge on every
// weighted normal system. Starts from the least-squares solution and stops
// on relative change of z below 1e-8, on the iteration cap, or when a step
// can no longer decrease the objective. `pinv_d` optionally supplies a
// precomputed pinv(D) so batch callers can share one factorization.
Vec irls_l1(const Mat& d, const Vec& y, int max_iters = 50, double eps = 1e-6,
            const Mat* pinv_d = nullptr);

}  // namespace drddl

#endif  // DRDDL_SOLVERS_HPP
