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

// Reference solvers for the allocation QP, written against the objective
// definition only. They share no code with the active-set allocator.

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace oracle {

struct BoxQp {
  Eigen::MatrixXd b;
  Eigen::VectorXd tau, w, lo, hi;
  double eps = 1e-6;

  double reg() const { return eps * w.array().square().mean(); }

  double objective(const Eigen::VectorXd& f) const {
    double j = 0.0;
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      double row = -tau[r];
      for (Eigen::Index c = 0; c < b.cols(); ++c) row += b(r, c) * f[c];
      j += w[r] * w[r] * row * row;
    }
    return j + reg() * f.squaredNorm();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd wr = w.array().square() * (b * f - tau).array();
    return 2.0 * (b.transpose() * wr) + 2.0 * reg() * f;
  }

  Eigen::VectorXd project(Eigen::VectorXd f) const { return f.cwiseMax(lo).cwiseMin(hi); }
};

/// Accelerated projected gradient with adaptive restart, iterated until the
/// iterate stops moving (1e-13) or the budget runs out.
inline Eigen::VectorXd projected_gradient(const BoxQp& qp, int max_iter = 400000) {
  // Frobenius bound on the gradient's Lipschitz constant.
  const double lipschitz = 2.0 * ((qp.w.asDiagonal() * qp.b).squaredNorm() + qp.reg());
  const double step = 1.0 / lipschitz;
  Eigen::VectorXd x = qp.project(Eigen::VectorXd::Zero(qp.b.cols()));
  Eigen::VectorXd y = x;
  double t = 1.0;
  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd next = qp.project(y - step * qp.gradient(y));
    const double moved = (next - x).cwiseAbs().maxCoeff();
    if ((y - next).dot(next - x) > 0.0) {
      // restart momentum when it points uphill
      t = 1.0;
      y = next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / t_next) * (next - x);
      t = t_next;
    }
    x = next;
    if (moved <= 1e-13 * (1.0 + x.cwiseAbs().maxCoeff())) break;
  }
  return x;
}

/// Exhaustive search over the grid lo + k * h inside the box (n <= 3).
inline Eigen::VectorXd grid_search(const BoxQp& qp, double h) {
  const Eigen::Index n = qp.b.cols();
  std::vector<long> counts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    counts[static_cast<std::size_t>(i)] = std::lround((qp.hi[i] - qp.lo[i]) / h) + 1;
  Eigen::VectorXd best(n), f(n);
  double best_j = INFINITY;
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) f[i] = qp.lo[i] + static_cast<double>(idx[static_cast<std::size_t>(i)]) * h;
    const double j = qp.objective(f);
    if (j < best_j) {
      best_j = j;
      best = f;
    }
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == counts[d]) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return best;
}

/// Random 6 x 8 instance with rank-6 B, positive weights, and a demand that
/// is frequently outside the reachable set.
inline BoxQp random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-1.0, 1.0), weight(0.2, 3.0), lim(20.0, 70.0), mag(0.0, 400.0);
  BoxQp qp;
  qp.b.resize(6, 8);
  for (Eigen::Index i = 0; i < qp.b.size(); ++i) qp.b.data()[i] = entry(rng);
  qp.w.resize(6);
  qp.tau.resize(6);
  for (int i = 0; i < 6; ++i) {
    qp.w[i] = weight(rng);
    qp.tau[i] = entry(rng);
  }
  qp.tau *= mag(rng);
  qp.lo.resize(8);
  qp.hi.resize(8);
  for (int i = 0; i < 8; ++i) {
    qp.lo[i] = -lim(rng);
    qp.hi[i] = lim(rng);
  }
  return qp;
}

/// Square (n <= 3) instance whose exact optimum `f_star` lies on the
/// 0.01 grid, with a random subset of components held at a bound by a
/// strictly signed multiplier. The demand is solved from the KKT system.
inline BoxQp grid_instance(std::mt19937_64& rng, int n, Eigen::VectorXd& f_star) {
  std::uniform_real_distribution<double> entry(-1.0, 1.0), weight(0.5, 2.0), mult(0.5, 3.0);
  std::uniform_int_distribution<int> bound_steps(20, 50), coin(0, 2);
  BoxQp qp;
  qp.eps = 1e-6;
  while (true) {
    qp.b = Eigen::MatrixXd(n, n);
    for (Eigen::Index i = 0; i < qp.b.size(); ++i) qp.b.data()[i] = entry(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(qp.b);
    const auto& s = svd.singularValues();
    if (s[n - 1] > 0.3 && s[0] / s[n - 1] < 6.0) break;
  }
  qp.w.resize(n);
  qp.lo.resize(n);
  qp.hi.resize(n);
  f_star.resize(n);
  Eigen::VectorXd half_grad = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    qp.w[i] = weight(rng);
    qp.lo[i] = -0.01 * bound_steps(rng);
    qp.hi[i] = 0.01 * bound_steps(rng);
    const int kind = coin(rng);
    if (kind == 0) {
      f_star[i] = qp.lo[i];
      half_grad[i] = mult(rng);   // pushing further down would help; bound holds it
    } else if (kind == 1) {
      f_star[i] = qp.hi[i];
      half_grad[i] = -mult(rng);
    } else {
      std::uniform_int_distribution<int> pick(static_cast<int>(std::lround(qp.lo[i] * 100)) + 1,
                                              static_cast<int>(std::lround(qp.hi[i] * 100)) - 1);
      f_star[i] = 0.01 * pick(rng);
    }
  }
  // B^T W^2 (B f - tau) + reg f = half_grad
  const Eigen::MatrixXd btw2 = qp.b.transpose() * qp.w.array().square().matrix().asDiagonal();
  qp.tau = qp.b * f_star - btw2.fullPivLu().solve(half_grad - qp.reg() * f_star);
  return qp;
}

}  // namespace oracle
