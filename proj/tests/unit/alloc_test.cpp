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

#include <random>

#include "../support/alloc_oracle.hpp"
#include "alloc/allocator.hpp"
#include "doctest.h"
#include "sim/layout.hpp"

using namespace scorpion;
using namespace scorpion::alloc;

namespace {

AllocationProblem toy(std::initializer_list<double> b_row, double tau, double lo, double hi) {
  AllocationProblem p;
  p.b = Eigen::RowVectorXd::Map(std::data(b_row), static_cast<Eigen::Index>(b_row.size()));
  p.tau = Eigen::VectorXd::Constant(1, tau);
  p.weights = Eigen::VectorXd::Ones(1);
  p.lower = Eigen::VectorXd::Constant(p.b.cols(), lo);
  p.upper = Eigen::VectorXd::Constant(p.b.cols(), hi);
  return p;
}

AllocationProblem from_oracle(const oracle::BoxQp& qp) { return {qp.b, qp.tau, qp.w, qp.lo, qp.hi, qp.eps}; }

AllocationProblem default_problem(const Vector6d& tau) {
  const auto layout = sim::default_layout();
  return {sim::build_allocation_matrix(layout), tau, Vector6d::Ones(), layout.lower_limits(), layout.upper_limits(),
          1e-6};
}

// KKT residual of the objective's gradient against the box multipliers.
void check_kkt(const AllocationProblem& p, const Eigen::VectorXd& f) {
  oracle::BoxQp qp{p.b, p.tau, p.weights, p.lower, p.upper, p.epsilon};
  const Eigen::VectorXd g = qp.gradient(f);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    REQUIRE(f[i] >= p.lower[i]);
    REQUIRE(f[i] <= p.upper[i]);
    if (f[i] == p.lower[i]) CHECK(g[i] >= -1e-8 * scale);
    else if (f[i] == p.upper[i]) CHECK(g[i] <= 1e-8 * scale);
    else CHECK(std::abs(g[i]) <= 1e-8 * scale);
  }
}

}  // namespace

TEST_CASE("zero demand gives zero thrust") {
  const auto r = allocate(default_problem(Vector6d::Zero()));
  CHECK(r.thrust.isZero(0.0));
  CHECK(r.residual.isZero(0.0));
  CHECK(r.saturated.empty());
}

TEST_CASE("two-thruster toy splits the demand symmetrically") {
  const auto r = allocate(toy({1.0, 1.0}, 1.0, -1.0, 1.0));
  CHECK(r.thrust[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.thrust[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(r.thrust[0] - r.thrust[1]) < 1e-9);
}

TEST_CASE("single-thruster toy clamps at the bound") {
  const auto r = allocate(toy({1.0}, 5.0, -3.0, 3.0));
  CHECK(r.thrust[0] == 3.0);
  CHECK(r.residual[0] == doctest::Approx(-2.0));
  REQUIRE(r.saturated.size() == 1);
  CHECK(r.saturated[0] == 0);
}

TEST_CASE("invalid inputs are argument errors") {
  auto p = toy({1.0}, 1.0, -3.0, 3.0);
  p.tau[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(allocate(p), ArgumentError);
  p = toy({1.0}, 1.0, -3.0, 3.0);
  p.weights[0] = 0.0;
  CHECK_THROWS_AS(allocate(p), ArgumentError);
  p = toy({1.0}, 1.0, 1.0, 3.0);
  CHECK_THROWS_AS(allocate(p), ArgumentError);
}

TEST_CASE("iteration cap reports the best feasible iterate") {
  std::mt19937_64 rng(3);
  auto qp = oracle::random_instance(rng);
  qp.tau *= 10.0;  // heavily saturated
  try {
    allocate(from_oracle(qp), SolverOptions{1});
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    const auto& f = e.best().thrust;
    CHECK(((f - qp.lo).array() >= 0.0).all());
    CHECK(((qp.hi - f).array() >= 0.0).all());
  }
}

TEST_CASE("random instances satisfy KKT and match the projected-gradient oracle") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const auto qp = oracle::random_instance(rng);
    const auto p = from_oracle(qp);
    const auto r = allocate(p);
    check_kkt(p, r.thrust);
    const double j_ref = qp.objective(oracle::projected_gradient(qp));
    const double j = qp.objective(r.thrust);
    CHECK(j <= j_ref + 1e-6);
    CHECK(std::abs(j - j_ref) <= 1e-6);
    for (int i : r.saturated) CHECK((r.thrust[i] == p.lower[i] || r.thrust[i] == p.upper[i]));
    CHECK(r.residual.isApprox(p.b * r.thrust - p.tau));
  }
}

TEST_CASE("grid oracle agrees on small instances") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 12; ++k) {
    const int n = 1 + k % 3;
    Eigen::VectorXd f_star;
    const auto qp = oracle::grid_instance(rng, n, f_star);
    const auto r = allocate(from_oracle(qp));
    const Eigen::VectorXd grid = oracle::grid_search(qp, 0.01);
    for (int i = 0; i < n; ++i) {
      CHECK(std::lround(grid[i] * 100.0) == std::lround(f_star[i] * 100.0));
      CHECK(std::lround(r.thrust[i] * 100.0) == std::lround(grid[i] * 100.0));
      CHECK(std::abs(r.thrust[i] - f_star[i]) <= 1e-9);
    }
  }
}

TEST_CASE("interior solutions equal the unconstrained weighted least squares") {
  std::mt19937_64 rng(5);
  int interior = 0;
  for (int k = 0; k < 200; ++k) {
    auto qp = oracle::random_instance(rng);
    qp.tau *= 0.05;
    const auto p = from_oracle(qp);
    const auto r = allocate(p);
    if (!r.saturated.empty()) continue;
    ++interior;
    const Eigen::VectorXd u = unconstrained_wls(p.b, p.tau, p.weights, p.epsilon);
    CHECK((r.thrust - u).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK(interior > 50);
}

TEST_CASE("unconstrained solver") {
  Eigen::MatrixXd b(2, 2);
  b << 2.0, 1.0, -1.0, 3.0;
  Eigen::VectorXd tau(2);
  tau << 1.0, 4.0;
  const Eigen::VectorXd f = unconstrained_wls(b, tau, Eigen::VectorXd::Ones(2), 0.0);
  CHECK((b * f - tau).norm() < 1e-12);

  Eigen::MatrixXd row(1, 2);
  row << 1.0, 1.0;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd mn = unconstrained_wls(row, one, one, 1e-9);
  CHECK(mn[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(mn[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(unconstrained_wls(row, one, one, 0.0), ConditioningError);
}

TEST_CASE("uniform weight scaling leaves the minimizer unchanged") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const auto qp = oracle::random_instance(rng);
    auto p = from_oracle(qp);
    const auto a = allocate(p);
    p.weights *= 7.3;
    const auto c = allocate(p);
    CHECK((a.thrust - c.thrust).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("saturated set grows monotonically along achievable axes") {
  for (int axis = 0; axis < 6; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::vector<int> previous;
      for (int step = 1; step <= 60; ++step) {
        Vector6d tau = Vector6d::Zero();
        tau[axis] = sign * step * (axis < 3 ? 5.0 : 1.0);
        const auto r = allocate(default_problem(tau));
        for (int i : previous) CHECK(std::find(r.saturated.begin(), r.saturated.end(), i) != r.saturated.end());
        previous = r.saturated;
      }
      CHECK(!previous.empty());
    }
  }
}
