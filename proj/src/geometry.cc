// Copyright 2026 The DLM Authors
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

#include "dlm/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dlm/error.h"

namespace dlm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double CheckFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("non-finite ") + what + ": " + std::to_string(v));
  }
  return v;
}

Pose2 Interpolate(const Pose2& a, const Pose2& b, double t) {
  const double dtheta = WrapAngle(b.theta() - a.theta());
  return Pose2(a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()),
               a.theta() + t * dtheta);
}

}  // namespace

double WrapAngle(double theta) {
  CheckFinite(theta, "angle");
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double AngularDifference(double a, double b) {
  CheckFinite(a, "angle");
  CheckFinite(b, "angle");
  return std::abs(WrapAngle(a - b));
}

Pose2::Pose2(double x, double y, double theta)
    : x_(CheckFinite(x, "x")),
      y_(CheckFinite(y, "y")),
      theta_(WrapAngle(theta)) {}

void Pose2::set_x(double x) { x_ = CheckFinite(x, "x"); }
void Pose2::set_y(double y) { y_ = CheckFinite(y, "y"); }

Pose2 Pose2::operator*(const Pose2& other) const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  return Pose2(x_ + c * other.x_ - s * other.y_,
               y_ + s * other.x_ + c * other.y_, theta_ + other.theta_);
}

Pose2 Pose2::Inverse() const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  return Pose2(-c * x_ - s * y_, s * x_ - c * y_, -theta_);
}

double PlanarDistance(const Pose2& a, const Pose2& b) {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

double Se2Distance(const Pose2& a, const Pose2& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dt = kHeadingWeight * WrapAngle(a.theta() - b.theta());
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

Trajectory::Trajectory(std::vector<Pose2> poses)
    : poses_(std::move(poses)), active_len_(static_cast<int>(poses_.size())) {}

Trajectory::Trajectory(std::vector<Pose2> poses, int active_len)
    : poses_(std::move(poses)), active_len_(active_len) {
  if (active_len_ < 1 || active_len_ > static_cast<int>(poses_.size())) {
    Fail(ErrorCode::kInvalidArgument,
         "active length " + std::to_string(active_len) + " outside [1, " +
             std::to_string(poses_.size()) + "]");
  }
}

Trajectory Trajectory::Truncated() const {
  return Trajectory(
      std::vector<Pose2>(poses_.begin(), poses_.begin() + active_len_));
}

Trajectory Trajectory::Padded(int capacity) const {
  if (capacity < active_len_) {
    Fail(ErrorCode::kInvalidArgument,
         "capacity " + std::to_string(capacity) + " below active length " +
             std::to_string(active_len_));
  }
  std::vector<Pose2> poses(poses_.begin(), poses_.begin() + active_len_);
  poses.resize(capacity, back());
  return Trajectory(std::move(poses), active_len_);
}

double ArcLength(const Trajectory& traj) {
  if (traj.empty() || traj.active_len() < 1) {
    Fail(ErrorCode::kInvalidArgument, "arc length of an empty trajectory");
  }
  double total = 0.0;
  for (int i = 1; i < traj.active_len(); ++i) {
    total += PlanarDistance(traj[i - 1], traj[i]);
  }
  return total;
}

Trajectory Resample(const Trajectory& traj, int n) {
  if (traj.empty()) {
    Fail(ErrorCode::kInvalidArgument, "resample of an empty trajectory");
  }
  if (n < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "resample needs n >= 2, got " + std::to_string(n));
  }
  const auto src = traj.active();
  const int m = static_cast<int>(src.size());
  if (m == 1) return Trajectory(std::vector<Pose2>(n, src[0]));

  // Cumulative parameter per source pose: arc length, or index when the
  // path has no planar extent.
  std::vector<double> param(m, 0.0);
  for (int i = 1; i < m; ++i) {
    param[i] = param[i - 1] + PlanarDistance(src[i - 1], src[i]);
  }
  if (param.back() <= 0.0) {
    for (int i = 0; i < m; ++i) param[i] = static_cast<double>(i);
  }
  const double total = param.back();

  std::vector<Pose2> out;
  out.reserve(n);
  out.push_back(src.front());
  int seg = 0;
  for (int j = 1; j < n - 1; ++j) {
    const double target = total * static_cast<double>(j) / (n - 1);
    while (seg < m - 2 && param[seg + 1] < target) ++seg;
    const double len = param[seg + 1] - param[seg];
    const double t = len > 0.0 ? (target - param[seg]) / len : 0.0;
    out.push_back(Interpolate(src[seg], src[seg + 1], std::clamp(t, 0.0, 1.0)));
  }
  out.push_back(src.back());
  return Trajectory(std::move(out));
}

Trajectory ToStartFrame(const Trajectory& traj) {
  if (traj.empty()) return traj;
  const Pose2 inv = traj.front().Inverse();
  std::vector<Pose2> poses;
  poses.reserve(traj.size());
  for (const Pose2& p : traj.poses()) poses.push_back(inv * p);
  // The first pose is exactly the identity; avoid round-off residue.
  poses.front() = Pose2();
  return Trajectory(std::move(poses), traj.active_len());
}

Trajectory Transform(const Pose2& origin, const Trajectory& traj) {
  std::vector<Pose2> poses;
  poses.reserve(traj.size());
  for (const Pose2& p : traj.poses()) poses.push_back(origin * p);
  return Trajectory(std::move(poses), traj.active_len());
}

}  // namespace dlm
