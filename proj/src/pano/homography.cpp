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

#include "pano/homography.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <random>

namespace scorpion::pano {

namespace {

Eigen::Matrix3d normalizing_transform(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double ms = 0.0;
  for (const auto& p : pts) ms += (p - mean).squaredNorm();
  const double rms = std::sqrt(ms / static_cast<double>(pts.size()));
  if (!(rms > 0.0)) throw EstimationError("homography: all points coincide");
  const double s = std::sqrt(2.0) / rms;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * mean.x(), 0.0, s, -s * mean.y(), 0.0, 0.0, 1.0;
  return t;
}

bool has_collinear_triple(const std::vector<Eigen::Vector2d>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        const Eigen::Vector2d a = p[j] - p[i], b = p[k] - p[i];
        const double cross = a.x() * b.y() - a.y() * b.x();
        if (std::abs(cross) <= 1e-9 * std::max(1.0, a.norm() * b.norm())) return true;
      }
  return false;
}

std::vector<bool> classify(const std::vector<Correspondence>& corrs, const Homography& h, double threshold,
                           int& count) {
  std::vector<bool> in(corrs.size(), false);
  count = 0;
  if (std::abs(h.determinant()) <= 1e-12) return in;
  const Homography inv = h.inverse();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double e = symmetric_transfer_error(h, inv, corrs[i]);
    if (e < threshold) {
      in[i] = true;
      ++count;
    }
  }
  return in;
}

}  // namespace

Eigen::Vector2d apply(const Homography& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = h * p.homogeneous();
  return q.hnormalized();
}

Homography estimate_homography_dlt(const std::vector<Correspondence>& corrs) {
  if (corrs.size() < 4) throw EstimationError("homography: at least 4 correspondences required");
  std::vector<Eigen::Vector2d> src, dst;
  for (const auto& c : corrs) {
    if (!c.src.allFinite() || !c.dst.allFinite()) throw EstimationError("homography: non-finite coordinate");
    src.push_back(c.src);
    dst.push_back(c.dst);
  }
  if (corrs.size() == 4 && (has_collinear_triple(src) || has_collinear_triple(dst)))
    throw EstimationError("homography: three of the four points are collinear");

  const Eigen::Matrix3d ts = normalizing_transform(src), td = normalizing_transform(dst);
  const auto n = static_cast<Eigen::Index>(corrs.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d s = ts * src[static_cast<std::size_t>(i)].homogeneous();
    const Eigen::Vector3d d = td * dst[static_cast<std::size_t>(i)].homogeneous();
    const double x = s.x() / s.z(), y = s.y() / s.z(), u = d.x() / d.z(), v = d.y() / d.z();
    a.row(2 * i) << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() >= 8 && sv[7] <= 1e-10 * sv[0])
    throw EstimationError("homography: degenerate configuration (solution not unique)");
  const Eigen::VectorXd hv = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hv[0], hv[1], hv[2], hv[3], hv[4], hv[5], hv[6], hv[7], hv[8];
  Homography h = td.inverse() * hn * ts;
  if (std::abs(h(2, 2)) <= 1e-15) throw EstimationError("homography: h33 vanishes");
  h /= h(2, 2);
  if (!h.allFinite() || std::abs(h.determinant()) <= 1e-12) throw EstimationError("homography: singular estimate");
  return h;
}

double symmetric_transfer_error(const Homography& h, const Homography& h_inv, const Correspondence& c) {
  const double fwd = (apply(h, c.src) - c.dst).norm();
  const double bwd = (apply(h_inv, c.dst) - c.src).norm();
  const double e = std::max(fwd, bwd);
  return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

RansacResult ransac_homography(const std::vector<Correspondence>& corrs, const RansacOptions& opt) {
  if (corrs.size() < 4) throw EstimationError("ransac: at least 4 correspondences required");
  if (!(opt.inlier_threshold_px > 0.0)) throw ArgumentError("ransac: threshold must be positive");
  if (!(opt.confidence > 0.0 && opt.confidence < 1.0)) throw ArgumentError("ransac: confidence must lie in (0, 1)");

  std::mt19937_64 rng(opt.seed);
  const std::size_t n = corrs.size();
  RansacResult best;
  best.inliers.assign(n, false);
  long needed = opt.max_iterations;
  int it = 0;
  for (; it < needed && it < opt.max_iterations; ++it) {
    std::array<std::size_t, 4> idx{};
    for (std::size_t k = 0; k < 4; ++k) {
      bool fresh = false;
      while (!fresh) {
        idx[k] = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        fresh = std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx[k]) ==
                idx.begin() + static_cast<std::ptrdiff_t>(k);
      }
    }
    Homography h;
    try {
      h = estimate_homography_dlt({corrs[idx[0]], corrs[idx[1]], corrs[idx[2]], corrs[idx[3]]});
    } catch (const EstimationError&) {
      continue;
    }
    int count = 0;
    std::vector<bool> in = classify(corrs, h, opt.inlier_threshold_px, count);
    if (count > best.inlier_count) {
      best.h = h;
      best.inliers = std::move(in);
      best.inlier_count = count;
      const double w = static_cast<double>(count) / static_cast<double>(n);
      const double miss = 1.0 - std::pow(w, 4);
      if (miss <= 0.0) {
        needed = 0;
      } else {
        const double est = std::ceil(std::log(1.0 - opt.confidence) / std::log(miss));
        needed = static_cast<long>(std::min<double>(est, opt.max_iterations));
      }
    }
  }
  best.iterations = it;
  if (best.inlier_count < 4) throw EstimationError("ransac: fewer than 4 inliers found");

  for (int round = 0; round < 5; ++round) {
    std::vector<Correspondence> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (best.inliers[i]) subset.push_back(corrs[i]);
    Homography refit;
    try {
      refit = estimate_homography_dlt(subset);
    } catch (const EstimationError&) {
      break;
    }
    int count = 0;
    std::vector<bool> in = classify(corrs, refit, opt.inlier_threshold_px, count);
    if (count < 4) break;
    const bool same = in == best.inliers;
    best.h = refit;
    best.inliers = std::move(in);
    best.inlier_count = count;
    if (same) break;
  }
  return best;
}

}  // namespace scorpion::pano
