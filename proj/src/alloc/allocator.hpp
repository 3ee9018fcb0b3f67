// Copyright 2026 The Scorpion Twin Authors
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

#pragma once

#include <Eigen/Core>
#include <vector>

#include "common/error.hpp"

namespace scorpion::alloc {

/// Box-constrained weighted least-squares thrust allocation:
///
///   min_f  ||W (B f - tau)||^2 + eps * mean(W^2) * ||f||^2
///   s.t.   f_min <= f <= f_max
///
/// The Tikhonov term selects the minimum-norm member of the exact solution
/// set when B has a null space. It is scaled by mean(W^2) so that the
/// minimizer does not change when all weights are multiplied by a constant.
struct AllocationProblem {
  Eigen::MatrixXd b;         // axes x thrusters
  Eigen::VectorXd tau;       // desired wrench, one entry per axis
  Eigen::VectorXd weights;   // diagonal of W, all > 0
  Eigen::VectorXd lower;     // f_min, <= 0
  Eigen::VectorXd upper;     // f_max, >= 0
  double epsilon = 1e-6;
};

struct AllocationResult {
  Eigen::VectorXd thrust;
  Eigen::VectorXd residual;        // B f - tau
  std::vector<int> saturated;      // indices sitting on a bound (1e-9)
  int iterations = 0;
};

struct SolverOptions {
  int max_iterations = 64;
};

/// The active-set loop hit its iteration cap. Carries the best feasible
/// iterate. Valid convex input never produces this.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, AllocationResult best) : Error(what), best_(std::move(best)) {}
  const AllocationResult& best() const { return best_; }

 private:
  AllocationResult best_;
};

/// The regularized normal matrix is too ill-conditioned to solve reliably.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Exact primal active-set solution of the allocation QP. Throws
/// ArgumentError for non-finite or inconsistent input and SolverFailure
/// when the iteration cap is exceeded.
AllocationResult allocate(const AllocationProblem& problem, const SolverOptions& options = {});

/// Minimizer of the same objective ignoring the box, via the normal
/// equations. Throws ConditioningError when cond(H) > 1e12.
Eigen::VectorXd unconstrained_wls(const Eigen::MatrixXd& b, const Eigen::VectorXd& tau,
                                  const Eigen::VectorXd& weights, double epsilon);

/// Objective value of `f` for `problem`.
double objective(const AllocationProblem& problem, const Eigen::VectorXd& f);

/// Throws ArgumentError unless dimensions agree, entries are finite,
/// weights are positive, and f_min <= 0 <= f_max.
void validate(const AllocationProblem& problem);

}  // namespace scorpion::alloc
