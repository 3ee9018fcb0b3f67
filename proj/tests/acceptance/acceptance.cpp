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

// Acceptance suite: one PASS/FAIL line per headline criterion of the twin.
// Exit status 0 when every line passes, 1 otherwise.

#include <Eigen/SVD>
#include <bit>
#include <boost/asio.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "../support/alloc_oracle.hpp"
#include "alloc/allocator.hpp"
#include "mission/config.hpp"
#include "mission/corpus.hpp"
#include "mission/photosphere.hpp"
#include "mission/script.hpp"
#include "mission/simulate.hpp"
#include "net/live_runner.hpp"
#include "net/udp.hpp"
#include "pano/homography.hpp"
#include "pano/synthetic.hpp"
#include "telemetry/protocol.hpp"

using namespace scorpion;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

namespace {

const std::filesystem::path kRepo = SCORPION_SOURCE_DIR;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<Outcome()> run;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("scorpion_acceptance_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double metric(const mission::ExperimentReport& r, const std::string& name) {
  return r.metric(name).value_or(std::nan(""));
}

// Station keeping -----------------------------------------------------------

Outcome station_keeping() {
  const auto t0 = Clock::now();
  const auto report =
      mission::run_battery(mission::Config{}, kRepo / "missions/battery", scratch("battery"), std::nullopt);
  const double wall = seconds_since(t0);
  const double worst = metric(report, "worst_hold_error_m");
  return {report.passed() && worst <= 0.15 && wall < 30.0,
          fmt::format("worst hold error {:.4f} m (limit 0.15 m after 10 s settle), battery wall time {:.2f} s (limit 30 s)",
                      worst, wall)};
}

// Allocation ----------------------------------------------------------------

alloc::AllocationProblem from_oracle(const oracle::BoxQp& qp) { return {qp.b, qp.tau, qp.w, qp.lo, qp.hi, qp.eps}; }

bool feasible(const alloc::AllocationProblem& p, const Eigen::VectorXd& f) {
  return f.size() == p.lower.size() && f.allFinite() && (f.array() >= p.lower.array()).all() &&
         (f.array() <= p.upper.array()).all();
}

Outcome allocation_random() {
  std::mt19937_64 rng(20260101);
  double worst_gap = 0.0, solver_s = 0.0;
  int infeasible = 0, rank_deficient = 0;
  const auto t0 = Clock::now();
  for (int k = 0; k < 1000; ++k) {
    const auto qp = oracle::random_instance(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(qp.b);
    if (svd.singularValues()[5] < 1e-9) ++rank_deficient;
    const auto p = from_oracle(qp);
    const auto s0 = Clock::now();
    const auto r = alloc::allocate(p);
    solver_s += seconds_since(s0);
    if (!feasible(p, r.thrust)) ++infeasible;
    const double j_ref = qp.objective(oracle::projected_gradient(qp));
    worst_gap = std::max(worst_gap, std::abs(qp.objective(r.thrust) - j_ref));
  }
  const double wall = seconds_since(t0);
  return {worst_gap <= 1e-6 && infeasible == 0 && rank_deficient == 0 && wall < 60.0,
          fmt::format("1000 instances, max |J - J_oracle| {:.3g} (limit 1e-6), {} infeasible, {} rank-deficient, "
                      "solver {:.3f} s, total with oracle {:.2f} s (limit 60 s)",
                      worst_gap, infeasible, rank_deficient, solver_s, wall)};
}

Outcome allocation_grid() {
  std::mt19937_64 rng(20260102);
  int disagree = 0, infeasible = 0;
  const auto t0 = Clock::now();
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    Eigen::VectorXd f_star;
    const auto qp = oracle::grid_instance(rng, n, f_star);
    const auto p = from_oracle(qp);
    const auto r = alloc::allocate(p);
    if (!feasible(p, r.thrust)) ++infeasible;
    const Eigen::VectorXd grid = oracle::grid_search(qp, 0.01);
    for (int i = 0; i < n; ++i)
      if (std::lround(r.thrust[i] * 100.0) != std::lround(grid[i] * 100.0)) {
        ++disagree;
        break;
      }
  }
  const double wall = seconds_since(t0);
  return {disagree == 0 && infeasible == 0 && wall < 60.0,
          fmt::format("100 instances with 1-3 thrusters, {} disagree with the 0.01 grid optimum, {} infeasible, {:.2f} s",
                      disagree, infeasible, wall)};
}

// Vision --------------------------------------------------------------------

mission::ExperimentReport run_corpus(const std::string& recipe, const std::string& tag) {
  const auto dir = scratch(tag + "_corpus");
  mission::generate_corpus(mission::load_recipe(kRepo / "corpora" / recipe), dir);
  return mission::evaluate_corpus(dir, mission::load_bands(kRepo / "config/bands.yaml"), scratch(tag + "_eval"));
}

Outcome length_measurement() {
  const auto r = run_corpus("length.yaml", "length");
  const double frames = metric(r, "frames_evaluated");
  const double samples = metric(r, "length_samples");
  const double worst = metric(r, "max_length_error_pct");
  return {frames == 20 && samples >= 20 && worst < 5.0,
          fmt::format("{:.0f} frames, {:.0f} measurements, max error {:.3f}% (limit 5%)", frames, samples, worst)};
}

Outcome marker_detection() {
  const auto r = run_corpus("markers_noisy.yaml", "markers");
  const double acc = metric(r, "marker_accuracy");
  return {acc >= 0.94, fmt::format("{:.0f}/{:.0f} markers detected with the right colour, accuracy {:.4f} (limit 0.94), "
                                   "{:.0f} false positives",
                                   metric(r, "marker_true_positives"), metric(r, "markers"), acc,
                                   metric(r, "marker_false_positives"))};
}

Outcome map_fixtures() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(kRepo / "tests/fixtures/map"))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  double worst = 0.0;
  for (const auto& f : files) worst = std::max(worst, mission::map_fixture_deviation(mission::load_map_fixture(f)));

  const auto a = scratch("det_a"), b = scratch("det_b"), corpus = scratch("det_corpus");
  mission::generate_corpus(mission::load_recipe(kRepo / "corpora/markers_clean.yaml"), corpus);
  const auto bands = mission::load_bands(kRepo / "config/bands.yaml");
  const auto ra = mission::evaluate_corpus(corpus, bands, a);
  const auto rb = mission::evaluate_corpus(corpus, bands, b);
  const bool same = slurp(a / "detections.jsonl") == slurp(b / "detections.jsonl") &&
                    metric(ra, "synthetic_detector_map50") == metric(rb, "synthetic_detector_map50");
  return {files.size() >= 4 && worst <= 1e-12 && same,
          fmt::format("{} fixtures, max deviation from hand-computed AP {:.3g} (limit 1e-12), synthetic detector "
                      "rerun {} (mAP@0.5 {:.4f})",
                      files.size(), worst, same ? "identical" : "differs", metric(ra, "synthetic_detector_map50"))};
}

// Photosphere ---------------------------------------------------------------

Outcome ransac_recovery() {
  double worst = 0.0;
  int seeds = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed, ++seeds) {
    std::mt19937_64 rng(seed + 5000);
    const auto h = pano::random_homography(rng, 640, 480);
    auto data = pano::make_correspondences(h, 200, 0.3, 640, 480, seed);
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (auto& c : data.corrs)
      if (c.inlier) c.dst += Eigen::Vector2d{jitter(rng), jitter(rng)};
    pano::RansacOptions opt;
    opt.seed = seed;
    const auto res = pano::ransac_homography(data.corrs, opt);
    for (const auto& c : data.corrs)
      if (c.inlier) worst = std::max(worst, (pano::apply(res.h, c.src) - pano::apply(data.truth, c.src)).norm());
  }
  return {worst < 0.5, fmt::format("{} seeds, 200 correspondences, 30% outliers, 0.3 px inlier noise, max reprojection against the true "
                                   "homography on true inliers {:.4f} px (limit 0.5 px)",
                                   seeds, worst)};
}

Outcome sweep_composite() {
  const auto dir = scratch("sweep");
  mission::generate_sweep(mission::load_sweep_recipe(kRepo / "corpora/sweep.yaml"), dir);
  const auto r = mission::run_photosphere(dir, dir / "manifest.yaml", scratch("sweep_out"), {});
  const double coverage = metric(r, "coverage_deg");
  const double seam = metric(r, "wrap_seam_error");
  return {r.passed() && coverage >= 360.0 && seam < 2.0 / 255.0,
          fmt::format("12 frames, coverage {:.1f} deg (need 360), wrap seam error {:.5f} = {:.2f}/255 (limit 2/255)",
                      coverage, seam, seam * 255.0)};
}

// Protocol ------------------------------------------------------------------

float any_float(std::mt19937_64& rng) {
  while (true) {
    const float f = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
    if (std::isfinite(f)) return f;
  }
}

double any_double(std::mt19937_64& rng) {
  while (true) {
    const double d = std::bit_cast<double>(rng());
    if (std::isfinite(d)) return d;
  }
}

telemetry::Message any_message(std::mt19937_64& rng) {
  using namespace telemetry;
  switch (rng() % 8) {
    case 0: {
      TelemetryFrame f;
      f.timestamp_us = rng();
      for (float& x : f.pose) x = any_float(rng);
      for (float& x : f.twist) x = any_float(rng);
      f.depth_m = any_float(rng);
      f.temp_c = any_float(rng);
      f.int_pressure_pa = any_float(rng);
      f.water_pressure_pa = any_float(rng);
      f.leak = static_cast<std::uint8_t>(rng() & 1);
      for (float& x : f.thrust) x = any_float(rng);
      f.mode = static_cast<std::uint8_t>(rng() % 3);
      f.manip_yaw = any_float(rng);
      f.manip_jaw = any_float(rng);
      f.faults = static_cast<std::uint8_t>(rng());
      return f;
    }
    case 1: {
      JoystickWrench j;
      for (float& a : j.axes) a = any_float(rng);
      return j;
    }
    case 2: return SetMode{static_cast<std::uint8_t>(rng())};
    case 3: {
      SetHoldSetpoint s;
      for (double& x : s.pose) x = any_double(rng);
      return s;
    }
    case 4: return ManipulatorCmd{any_float(rng), any_float(rng)};
    case 5: {
      TrimFeedForward t;
      for (double& x : t.wrench) x = any_double(rng);
      return t;
    }
    case 6: return EmergencyStop{};
    default: {
      ErrorReport e;
      e.code = static_cast<std::uint8_t>(rng());
      const std::size_t n = rng() % 200;
      for (std::size_t i = 0; i < n; ++i) e.text.push_back(static_cast<char>(rng()));
      return e;
    }
  }
}

Outcome protocol_fuzz() {
  std::mt19937_64 rng(314159);
  int mismatches = 0, garbage_accepted_badly = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto m = any_message(rng);
    try {
      if (telemetry::decode(telemetry::encode(m)) != m) ++mismatches;
    } catch (const std::exception&) {
      ++mismatches;
    }
  }
  for (int i = 0; i < 100000; ++i) {
    std::vector<std::uint8_t> junk(rng() % 64);
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
    if (rng() % 2 && junk.size() >= 3) junk[0] = 0x48, junk[1] = 0x59, junk[2] = 0x01;
    try {
      const auto m = telemetry::decode(junk);
      if (telemetry::encode(m) != junk) ++garbage_accepted_badly;
    } catch (const telemetry::DecodeError&) {
    } catch (const std::exception&) {
      ++garbage_accepted_badly;
    }
  }
  return {mismatches == 0 && garbage_accepted_badly == 0,
          fmt::format("100000 random messages, {} round-trip mismatches; 100000 random buffers, {} decoded to a "
                      "non-canonical message or raised a foreign error",
                      mismatches, garbage_accepted_badly)};
}

Outcome protocol_bit_flips() {
  using namespace telemetry;
  TelemetryFrame frame;
  frame.timestamp_us = 123456;
  frame.pose = {1.25f, -0.5f, 2.0f, 0.01f, -0.02f, 3.1f};
  frame.thrust = {10.5f, -3.25f, 0.0f, 69.627f, -53.937f, 1e-3f, 7.0f, -7.0f};
  frame.mode = 2;
  std::vector<Message> goldens{frame,
                               JoystickWrench{{0.5f, -1.0f, 0.0f, 0.25f, 0.0f, 1.0f}},
                               SetMode{2},
                               SetHoldSetpoint{{1.0, -0.5, 2.0, 0.0, 0.0, 1.57}},
                               ManipulatorCmd{0.3f, -0.1f},
                               TrimFeedForward{{1.0, 0.0, -2.0, 0.0, 0.0, 0.5}},
                               EmergencyStop{},
                               ErrorReport{3, "thruster 4 saturated"}};
  std::size_t flips = 0, undetected = 0;
  for (const auto& m : goldens) {
    const auto g = encode(m);
    for (std::size_t bit = 0; bit < g.size() * 8; ++bit, ++flips) {
      auto bad = g;
      bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      try {
        decode(bad);
        ++undetected;
      } catch (const DecodeError&) {
      }
    }
  }
  return {undetected == 0, fmt::format("{} golden frames, {} single-bit flips, {} undetected", goldens.size(), flips,
                                       undetected)};
}

Outcome protocol_latency() {
  namespace asio = boost::asio;
  runtime::SessionConfig cfg;
  runtime::Session session(cfg);
  net::TelemetryReceiver rx;
  net::LiveOptions opt;
  opt.telemetry = net::PublisherOptions{"127.0.0.1", rx.port(), 50.0};
  opt.commands = net::CommandServerOptions{"127.0.0.1", 0};
  net::LiveRunner runner(session, opt);
  runner.start();
  auto loop = std::async(std::launch::async, [&] { return runner.run(); });

  asio::io_context io;
  asio::ip::tcp::socket socket(io);
  socket.connect({asio::ip::make_address("127.0.0.1"), runner.command_port()});
  socket.set_option(asio::ip::tcp::no_delay(true));
  while (session.ticks() < 5) std::this_thread::sleep_for(2ms);

  const std::uint64_t dt_us = static_cast<std::uint64_t>(std::llround(cfg.dt * 1e6));
  std::uint64_t worst = 0;
  int lost = 0;
  const int trials = 20;
  for (int k = 0; k < trials; ++k) {
    const std::uint8_t mode = (k % 2 == 0) ? 2 : 1;
    const std::uint64_t sent_at = session.snapshot().timestamp_us;
    asio::write(socket, asio::buffer(telemetry::encode(telemetry::SetMode{mode})));
    std::optional<telemetry::TelemetryFrame> seen;
    const auto deadline = Clock::now() + 2s;
    while (!seen && Clock::now() < deadline) {
      const auto f = rx.receive(500ms);
      if (f && f->mode == mode && f->timestamp_us > sent_at) seen = f;
    }
    if (!seen) {
      ++lost;
      continue;
    }
    worst = std::max(worst, (seen->timestamp_us - sent_at) / dt_us);
  }
  runner.request_stop();
  loop.get();
  runner.shutdown();
  return {lost == 0 && worst < 3,
          fmt::format("{} mode changes over TCP, worst reflected after {} ticks (limit < 3), {} never seen", trials,
                      worst, lost)};
}

// Determinism ---------------------------------------------------------------

Outcome determinism() {
  const std::vector<std::filesystem::path> scripts{kRepo / "missions/examples/anode_task.mission",
                                                   kRepo / "missions/battery/40_combined.mission"};
  int differing = 0;
  std::uintmax_t bytes = 0;
  for (const auto& s : scripts) {
    const auto script = mission::load_script(s);
    const auto a = mission::run_mission(mission::Config{}, script, {scratch("det_run_a"), std::nullopt});
    const auto b = mission::run_mission(mission::Config{}, script, {scratch("det_run_b"), std::nullopt});
    const auto la = slurp(a.csv), lb = slurp(b.csv);
    bytes += la.size();
    if (la != lb || la.empty()) ++differing;
  }
  return {differing == 0, fmt::format("{} seeded missions run twice, {} CSV logs differ ({} bytes compared)",
                                      scripts.size(), differing, bytes)};
}

}  // namespace

int main() {
  const std::vector<Check> checks{
      {"station-keeping under the canonical disturbance battery", station_keeping},
      {"allocation matches the projected-gradient oracle", allocation_random},
      {"allocation matches the exhaustive grid oracle", allocation_grid},
      {"length measurement within 5%", length_measurement},
      {"colour T-marker detection on the noisy corpus", marker_detection},
      {"detection metrics equal hand-computed fixtures", map_fixtures},
      {"RANSAC recovers the true homography", ransac_recovery},
      {"twelve-frame sweep composites to a seamless sphere", sweep_composite},
      {"wire protocol fuzz round trip", protocol_fuzz},
      {"wire protocol single-bit corruption detection", protocol_bit_flips},
      {"command to telemetry loopback latency", protocol_latency},
      {"seeded runs produce identical logs", determinism},
  };
  int failed = 0;
  for (const auto& c : checks) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s  %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", checks.size() - failed, checks.size());
  return failed ? 1 : 0;
}
