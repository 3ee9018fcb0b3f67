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

#include <Eigen/SVD>
#include <random>

#include "doctest.h"
#include "sim/dynamics.hpp"
#include "sim/layout.hpp"
#include "sim/manipulator.hpp"
#include "sim/sensors.hpp"

using namespace scorpion;
using namespace scorpion::sim;

namespace {

Eigen::Index numeric_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-9) ++r;
  return r;
}

Thruster unit_thruster(Eigen::Vector3d r, Eigen::Vector3d d) { return {r, d, -10.0, 10.0}; }

VehicleParams frictionless() {
  VehicleParams p;
  p.added_mass.setZero();
  p.quadratic_drag.setZero();
  p.cob_offset.setZero();
  return p;
}

}  // namespace

TEST_CASE("allocation matrix columns") {
  ThrusterLayout one{{unit_thruster({0, 0, 0}, {1, 0, 0})}};
  Eigen::MatrixXd b = allocation_columns(one);
  CHECK(b.col(0).isApprox((Vector6d() << 1, 0, 0, 0, 0, 0).finished()));

  ThrusterLayout arm{{unit_thruster({0, 1, 0}, {0, 0, 1})}};
  b = allocation_columns(arm);
  CHECK(b.col(0).isApprox((Vector6d() << 0, 0, 1, 1, 0, 0).finished()));
}

TEST_CASE("default layout is full rank with T200 limits") {
  const ThrusterLayout layout = default_layout();
  REQUIRE(layout.size() == 8);
  const Eigen::MatrixXd b = build_allocation_matrix(layout);
  CHECK(b.rows() == 6);
  CHECK(b.cols() == 8);
  CHECK(numeric_rank(b) == 6);
  for (const auto& t : layout.thrusters) {
    CHECK(t.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.f_max == doctest::Approx(69.63).epsilon(1e-4));
    CHECK(t.f_min == doctest::Approx(-53.94).epsilon(1e-4));
  }
}

TEST_CASE("rank-deficient layout names the missing axes") {
  ThrusterLayout flat = default_layout();
  flat.thrusters.resize(4);  // horizontal thrusters only
  try {
    build_allocation_matrix(flat);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("heave") != std::string::npos);
    CHECK(msg.find("roll") != std::string::npos);
    CHECK(msg.find("pitch") != std::string::npos);
    CHECK(msg.find("surge") == std::string::npos);
  }
}

TEST_CASE("invalid layouts are rejected") {
  ThrusterLayout bad = default_layout();
  bad.thrusters[0].direction = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(build_allocation_matrix(bad), ConfigError);
  bad = default_layout();
  bad.thrusters[2].f_min = 1.0;
  CHECK_THROWS_AS(build_allocation_matrix(bad), ConfigError);
}

TEST_CASE("equilibrium is preserved") {
  const VehicleParams params;
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  VehicleState s;
  s.pose = {1.0, -2.0, 3.0, 0.0, 0.0, 0.7};
  VehicleState next = s;
  for (int i = 0; i < 500; ++i) next = step_dynamics(next, Eigen::VectorXd::Zero(8), Vector6d::Zero(), params, b, 0.02);
  CHECK(next == s);
}

TEST_CASE("constant surge force without drag follows Newton") {
  const VehicleParams params = frictionless();
  Eigen::MatrixXd b(6, 1);
  b << 1, 0, 0, 0, 0, 0;
  const double force = 12.0, dt = 0.02;
  VehicleState s;
  Eigen::VectorXd f(1);
  f << force;
  const int steps = 100;
  for (int i = 0; i < steps; ++i) s = step_dynamics(s, f, Vector6d::Zero(), params, b, dt);
  const double t = steps * dt;
  CHECK(s.twist.u == doctest::Approx(force * t / params.mass).epsilon(1e-12));
}

TEST_CASE("lateral step matches a fine-step reference integrator") {
  // Reference: classical RK4 on the decoupled sway equation at dt = 1e-4.
  const VehicleParams params;
  const double m = params.mass + params.added_mass[1];
  const double d = params.quadratic_drag[1];
  const double force = 10.0;
  auto accel = [&](double v) { return (force - d * std::abs(v) * v) / m; };

  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  Vector6d dist = Vector6d::Zero();
  dist[1] = force;
  VehicleState s;
  double y = 0.0, v = 0.0;
  const double h = 1e-4;
  int ref_steps_per_tick = 200;
  double err2 = 0.0, ref2 = 0.0;
  for (int tick = 1; tick <= 500; ++tick) {
    s = step_dynamics(s, Eigen::VectorXd::Zero(8), dist, params, b, 0.02);
    for (int k = 0; k < ref_steps_per_tick; ++k) {
      const double k1v = accel(v), k1y = v;
      const double k2v = accel(v + 0.5 * h * k1v), k2y = v + 0.5 * h * k1v;
      const double k3v = accel(v + 0.5 * h * k2v), k3y = v + 0.5 * h * k2v;
      const double k4v = accel(v + h * k3v), k4y = v + h * k3v;
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    }
    err2 += (s.pose.y - y) * (s.pose.y - y);
    ref2 += y * y;
  }
  // relative L2 error of the displacement curve over 10 s
  CHECK(std::sqrt(err2 / ref2) <= 0.01);
  CHECK(std::abs(s.pose.y - y) <= 0.01 * std::abs(y));
  CHECK(std::abs(s.pose.x) < 1e-12);
}

TEST_CASE("thrust enters the integrator exactly as B f") {
  const VehicleParams params = frictionless();
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  Eigen::VectorXd f(8);
  for (int i = 0; i < 8; ++i) f[i] = u(rng);
  const double dt = 0.01;
  const VehicleState next = step_dynamics({}, f, Vector6d::Zero(), params, b, dt);
  const Vector6d implied = next.twist.vector().cwiseProduct(params.effective_mass()) / dt;
  const Vector6d expected = b * f;
  // The twist clamp is far away for these forces.
  CHECK((implied - expected).norm() <= 1e-9 * expected.norm());
}

TEST_CASE("kinetic energy never increases without actuation") {
  VehicleParams params;
  params.cob_offset.setZero();
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    VehicleState s;
    s.twist = Twist::from_vector((Vector6d() << u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)).finished());
    double e = kinetic_energy(s.twist, params);
    for (int i = 0; i < 200; ++i) {
      s = step_dynamics(s, Eigen::VectorXd::Zero(8), Vector6d::Zero(), params, b, 0.02);
      const double e_next = kinetic_energy(s.twist, params);
      REQUIRE(e_next <= e + 1e-15);
      e = e_next;
    }
  }
}

TEST_CASE("emitted angles stay normalized and runs are deterministic") {
  const VehicleParams params;
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  Eigen::VectorXd f(8);
  f << 20, -20, 20, -20, 0, 0, 0, 0;  // pure yaw couple
  auto run = [&] {
    VehicleState s;
    std::vector<VehicleState> traj;
    for (int i = 0; i < 3000; ++i) {
      s = step_dynamics(s, f, Vector6d::Zero(), params, b, 0.02);
      traj.push_back(s);
    }
    return traj;
  };
  const auto a = run();
  const auto c = run();
  CHECK(a == c);
  double total_turn = 0.0;
  for (const auto& s : a) {
    for (double ang : {s.pose.roll, s.pose.pitch, s.pose.yaw}) {
      REQUIRE(ang > -kPi);
      REQUIRE(ang <= kPi);
    }
    total_turn += std::abs(s.twist.r) * 0.02;
  }
  CHECK(total_turn > 4 * kPi);
}

TEST_CASE("dt outside (0, 0.1] is rejected") {
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  CHECK_THROWS_AS(step_dynamics({}, Eigen::VectorXd::Zero(8), Vector6d::Zero(), {}, b, 0.0), ArgumentError);
  CHECK_THROWS_AS(step_dynamics({}, Eigen::VectorXd::Zero(8), Vector6d::Zero(), {}, b, 0.2), ArgumentError);
}

TEST_CASE("non-finite state raises a simulation fault") {
  const Eigen::MatrixXd b = build_allocation_matrix(default_layout());
  VehicleState s;
  s.pose.x = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step_dynamics(s, Eigen::VectorXd::Zero(8), Vector6d::Zero(), {}, b, 0.02), SimulationFault);
}

TEST_CASE("hydrostatic sensor readings") {
  Environment env;
  env.noise = false;
  SensorModel model(env, 1);
  VehicleState s;
  SensorReading r = model.read(s, 0.0);
  CHECK(r.water_pressure_pa - env.surface_pressure_pa == doctest::Approx(0.0));
  s.pose.z = 10.0;
  r = model.read(s, 0.0);
  CHECK(r.depth_m == 10.0);
  CHECK(r.water_pressure_pa - env.surface_pressure_pa == doctest::Approx(98066.5).epsilon(1e-12));
}

TEST_CASE("seeded sensor noise is repeatable and leak latches") {
  Environment env;
  env.leak_time_s = 1.0;
  SensorModel a(env, 42), b(env, 42);
  VehicleState s;
  s.pose.z = 3.0;
  bool seen_leak = false;
  for (int i = 0; i < 100; ++i) {
    const double t = i * 0.02;
    const SensorReading ra = a.read(s, t), rb = b.read(s, t);
    CHECK(ra.water_pressure_pa == rb.water_pressure_pa);
    CHECK(ra.imu_pose == rb.imu_pose);
    if (seen_leak) CHECK(ra.leak);
    seen_leak = seen_leak || ra.leak;
  }
  CHECK(seen_leak);
}

TEST_CASE("manipulator kinematics") {
  ManipulatorState m;
  const int steps = 1000;
  const double dt = 2.0 * kPi / steps;
  double prev = m.yaw;
  for (int i = 0; i < steps; ++i) {
    m = step_manipulator(m, {1.0, 0.0}, dt);
    CHECK(m.yaw > prev);
    prev = m.yaw;
  }
  CHECK(m.yaw == doctest::Approx(2.0 * kPi).epsilon(1e-12));

  ManipulatorState open{0.0, 1.0};
  CHECK(step_manipulator(open, {0.0, 0.5}, 0.1).jaw == 1.0);
  CHECK(step_manipulator({0.0, 0.0}, {0.0, -0.5}, 0.1).jaw == 0.0);
  // Rate limits apply.
  CHECK(step_manipulator({}, {5.0, 0.0}, 1.0).yaw == doctest::Approx(1.0));
}

TEST_CASE("grip-rotate-retract sequence matches hand integration") {
  // open 0.3 s at 0.5/s, close 2.0 s at -0.5/s (clamps at 0), rotate 3 s at
  // 0.8 rad/s, counter-rotate 1 s at -1 rad/s, open 1 s at 0.4/s.
  struct Phase { double dur, yaw_rate, jaw_rate; };
  const std::vector<Phase> script = {{0.3, 0, 0.5}, {2.0, 0, -0.5}, {3.0, 0.8, 0}, {1.0, -1.0, 0}, {1.0, 0, 0.4}};
  const double dt = 0.01;
  ManipulatorState m;
  for (const auto& ph : script) {
    const int n = static_cast<int>(std::lround(ph.dur / dt));
    for (int i = 0; i < n; ++i) m = step_manipulator(m, {ph.yaw_rate, ph.jaw_rate}, dt);
  }
  CHECK(m.yaw == doctest::Approx(0.8 * 3.0 - 1.0).epsilon(1e-12));
  CHECK(m.jaw == doctest::Approx(0.4).epsilon(1e-12));
}
