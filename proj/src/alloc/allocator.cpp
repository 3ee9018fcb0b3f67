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

#include "alloc/allocator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace scorpion::alloc {

namespace {

enum class Bound : unsigned char { Free, Lower, Upper };

double regularization(const Eigen::VectorXd& weights, double epsilon) {
  return epsilon * weights.array().square().mean();
}

struct NormalForm {
  Eigen::MatrixXd h;  // B^T W^2 B + eps' I
  Eigen::VectorXd g;  // B^T W^2 tau
};

NormalForm normal_form(const Eigen::MatrixXd& b, const Eigen::VectorXd& tau, const Eigen::VectorXd& weights,
                       double epsilon) {
  const Eigen::VectorXd w2 = weights.array().square();
  NormalForm nf;
  nf.h = b.transpose() * w2.asDiagonal() * b;
  nf.h.diagonal().array() += regularization(weights, epsilon);
  nf.g = b.transpose() * (w2.asDiagonal() * tau);
  return nf;
}

AllocationResult finish(const AllocationProblem& p, Eigen::VectorXd f, int iterations) {
  AllocationResult r;
  f = f.cwiseMax(p.lower).cwiseMin(p.upper);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::abs(f[i] - p.lower[i]) <= 1e-9) f[i] = p.lower[i];
    if (std::abs(f[i] - p.upper[i]) <= 1e-9) f[i] = p.upper[i];
    if (f[i] == p.lower[i] || f[i] == p.upper[i]) r.saturated.push_back(static_cast<int>(i));
  }
  r.residual = p.b * f - p.tau;
  r.thrust = std::move(f);
  r.iterations = iterations;
  return r;
}

}  // namespace

void validate(const AllocationProblem& p) {
  const auto n = p.b.cols();
  const auto m = p.b.rows();
  if (n == 0 || m == 0) throw ArgumentError("allocation matrix is empty");
  if (p.tau.size() != m || p.weights.size() != m)
    throw ArgumentError("wrench and weight vectors must have one entry per axis");
  if (p.lower.size() != n || p.upper.size() != n)
    throw ArgumentError("limit vectors must have one entry per thruster");
  if (!p.b.allFinite() || !p.tau.allFinite() || !p.weights.allFinite() || !p.lower.allFinite() ||
      !p.upper.allFinite() || !std::isfinite(p.epsilon))
    throw ArgumentError("allocation input contains non-finite values");
  if ((p.weights.array() <= 0.0).any()) throw ArgumentError("axis weights must be positive");
  if ((p.lower.array() > 0.0).any() || (p.upper.array() < 0.0).any())
    throw ArgumentError("thrust limits must satisfy f_min <= 0 <= f_max");
  if (p.epsilon < 0.0) throw ArgumentError("regularization must be non-negative");
}

double objective(const AllocationProblem& p, const Eigen::VectorXd& f) {
  const Eigen::VectorXd r = p.weights.asDiagonal() * (p.b * f - p.tau);
  return r.squaredNorm() + regularization(p.weights, p.epsilon) * f.squaredNorm();
}

Eigen::VectorXd unconstrained_wls(const Eigen::MatrixXd& b, const Eigen::VectorXd& tau,
                                  const Eigen::VectorXd& weights, double epsilon) {
  if (tau.size() != b.rows() || weights.size() != b.rows())
    throw ArgumentError("wrench and weight vectors must have one entry per axis");
  const NormalForm nf = normal_form(b, tau, weights, epsilon);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(nf.h, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) throw ConditioningError("normal matrix condition estimate exceeds 1e12");
  return nf.h.ldlt().solve(nf.g);
}

AllocationResult allocate(const AllocationProblem& p, const SolverOptions& options) {
  validate(p);
  const Eigen::Index n = p.b.cols();
  const NormalForm nf = normal_form(p.b, p.tau, p.weights, p.epsilon);
  const double scale = std::max({1.0, nf.h.cwiseAbs().maxCoeff(), nf.g.cwiseAbs().maxCoeff()});
  const double dual_tol = 1e-12 * scale;

  // Start from the origin, which is always feasible.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  std::vector<Bound> state(static_cast<std::size_t>(n), Bound::Free);
  for (Eigen::Index i = 0; i < n; ++i)
    if (p.lower[i] == 0.0 && p.upper[i] == 0.0) state[static_cast<std::size_t>(i)] = Bound::Lower;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (state[static_cast<std::size_t>(i)] == Bound::Free) free.push_back(i);

    // Equality-reduced problem: minimize over the free variables with the
    // bound variables held at their limits.
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    if (!free.empty()) {
      const auto k = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hff(k, k);
      Eigen::VectorXd rhs(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        rhs[a] = nf.g[free[static_cast<std::size_t>(a)]];
        for (Eigen::Index j = 0; j < n; ++j)
          if (state[static_cast<std::size_t>(j)] != Bound::Free) rhs[a] -= nf.h(free[static_cast<std::size_t>(a)], j) * f[j];
        for (Eigen::Index c = 0; c < k; ++c)
          hff(a, c) = nf.h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(c)]);
      }
      const Eigen::VectorXd target = hff.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < k; ++a) {
        const Eigen::Index i = free[static_cast<std::size_t>(a)];
        step[i] = target[a] - f[i];
      }
    }

    const double step_tol = 1e-13 * (1.0 + f.cwiseAbs().maxCoeff());
    if (step.cwiseAbs().maxCoeff() <= step_tol) {
      // Stationary on the working set: check multiplier signs.
      const Eigen::VectorXd grad = nf.h * f - nf.g;
      Eigen::Index release = -1;
      double most_negative = -dual_tol;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto s = state[static_cast<std::size_t>(i)];
        if (s == Bound::Free || (p.lower[i] == 0.0 && p.upper[i] == 0.0)) continue;
        const double lambda = s == Bound::Lower ? grad[i] : -grad[i];
        if (lambda < most_negative) {
          most_negative = lambda;
          release = i;
        }
      }
      if (release < 0) return finish(p, f, iter);
      state[static_cast<std::size_t>(release)] = Bound::Free;
      continue;
    }

    // Longest feasible step along `step`; the first bound hit joins the set.
    double alpha = 1.0;
    Eigen::Index blocking = -1;
    Bound blocking_side = Bound::Free;
    for (Eigen::Index i : free) {
      if (step[i] < 0.0) {
        const double a = (p.lower[i] - f[i]) / step[i];
        if (a < alpha) {
          alpha = a;
          blocking = i;
          blocking_side = Bound::Lower;
        }
      } else if (step[i] > 0.0) {
        const double a = (p.upper[i] - f[i]) / step[i];
        if (a < alpha) {
          alpha = a;
          blocking = i;
          blocking_side = Bound::Upper;
        }
      }
    }
    alpha = std::max(alpha, 0.0);
    f += alpha * step;
    f = f.cwiseMax(p.lower).cwiseMin(p.upper);
    if (blocking >= 0) {
      state[static_cast<std::size_t>(blocking)] = blocking_side;
      f[blocking] = blocking_side == Bound::Lower ? p.lower[blocking] : p.upper[blocking];
    }
  }
  throw SolverFailure("active-set iteration cap exceeded", finish(p, f, options.max_iterations));
}

}  // namespace scorpion::alloc
