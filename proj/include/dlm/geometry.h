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

#ifndef DLM_GEOMETRY_H_
#define DLM_GEOMETRY_H_

#include <span>
#include <vector>

namespace dlm {

// Stored pose count of every learned trajectory.
inline constexpr int kHorizon = 22;

// Radians of heading that weigh the same as one meter of translation in the
// SE(2) displacement norm.
inline constexpr double kHeadingWeight = 1.0;

// Wraps into (-pi, pi]. Throws kInvalidArgument on non-finite input.
double WrapAngle(double theta);

// Shortest-arc magnitude |wrap(a - b)|, in [0, pi].
double AngularDifference(double a, double b);

// Planar pose. The heading is wrapped on every construction and mutation.
class Pose2 {
 public:
  Pose2() = default;
  Pose2(double x, double y, double theta);

  double x() const { return x_; }
  double y() const { return y_; }
  double theta() const { return theta_; }

  void set_x(double x);
  void set_y(double y);
  void set_theta(double theta) { theta_ = WrapAngle(theta); }

  // Group product: `other` expressed in this pose's frame, mapped to the
  // parent frame.
  Pose2 operator*(const Pose2& other) const;
  Pose2 Inverse() const;

  bool operator==(const Pose2&) const = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

// Euclidean xy distance.
double PlanarDistance(const Pose2& a, const Pose2& b);

// sqrt(dx^2 + dy^2 + (w * wrap(dtheta))^2) with w = kHeadingWeight.
double Se2Distance(const Pose2& a, const Pose2& b);

// Ordered poses with an active prefix. Stored poses beyond the active length
// are padding (usually repeats of the last active pose).
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Pose2> poses);
  Trajectory(std::vector<Pose2> poses, int active_len);

  int size() const { return static_cast<int>(poses_.size()); }
  int active_len() const { return active_len_; }
  bool empty() const { return poses_.empty(); }

  const std::vector<Pose2>& poses() const { return poses_; }
  std::span<const Pose2> active() const {
    return {poses_.data(), static_cast<size_t>(active_len_)};
  }
  const Pose2& operator[](int i) const { return poses_[i]; }
  const Pose2& front() const { return poses_.front(); }
  // Last active pose.
  const Pose2& back() const { return poses_[active_len_ - 1]; }

  // Copy keeping only the active prefix.
  Trajectory Truncated() const;
  // Copy with `capacity` stored poses, padding by repeating the last active
  // pose. Active length is unchanged.
  Trajectory Padded(int capacity) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<Pose2> poses_;
  int active_len_ = 0;
};

// Sum of xy segment lengths over the active prefix.
double ArcLength(const Trajectory& traj);

// `n` poses at equal arc-length fractions of the active xy path, headings
// interpolated along the shortest arc. Endpoints are copied exactly. A path
// with zero xy length is parameterized by pose index instead, so in-place
// rotations keep their heading profile.
Trajectory Resample(const Trajectory& traj, int n);

// Rigid transform that puts the first pose at the origin with zero heading.
Trajectory ToStartFrame(const Trajectory& traj);

// Maps every pose of a start-frame trajectory through `origin`.
Trajectory Transform(const Pose2& origin, const Trajectory& traj);

}  // namespace dlm

#endif  // DLM_GEOMETRY_H_
