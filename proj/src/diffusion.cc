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

#include "dlm/diffusion.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "dlm/error.h"

namespace dlm::diffusion {

namespace {

void CheckStep(int k, const NoiseSchedule& schedule) {
  if (k < 1 || k > schedule.steps) {
    Fail(ErrorCode::kInvalidArgument,
         "diffusion step " + std::to_string(k) + " outside [1, " +
             std::to_string(schedule.steps) + "]");
  }
}

}  // namespace

NoiseSchedule MakeSchedule(int steps) {
  if (steps < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "noise schedule needs at least 2 steps, got " + std::to_string(steps));
  }
  NoiseSchedule s;
  s.steps = steps;
  double cumulative = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double beta =
        kBetaStart + (kBetaEnd - kBetaStart) * i / static_cast<double>(steps - 1);
    const double a = 1.0 - beta;
    cumulative *= a;
    s.beta.push_back(beta);
    s.alpha_bar.push_back(cumulative);
    s.alpha.push_back(1.0 / std::sqrt(a));
    s.gamma.push_back(beta / std::sqrt(1.0 - cumulative));
    s.sigma.push_back(i == 0 ? 0.0 : std::sqrt(beta));
  }
  return s;
}

Eigen::VectorXd Normalize(const Trajectory& traj,
                          const NormalizationStats& stats) {
  if (!(stats.xy_scale > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "normalization scale must be positive");
  }
  const double limit = 2.0 * stats.xy_scale;
  Eigen::VectorXd out(4 * traj.size());
  bool clamped = false;
  for (int i = 0; i < traj.size(); ++i) {
    const Pose2& p = traj[i];
    const double x = std::clamp(p.x(), -limit, limit);
    const double y = std::clamp(p.y(), -limit, limit);
    clamped = clamped || x != p.x() || y != p.y();
    out[4 * i + 0] = x / stats.xy_scale;
    out[4 * i + 1] = y / stats.xy_scale;
    out[4 * i + 2] = std::cos(p.theta());
    out[4 * i + 3] = std::sin(p.theta());
  }
  if (clamped) {
    spdlog::warn("trajectory leaves +-{} m; positions clamped", limit);
  }
  return out;
}

Trajectory Denormalize(const Eigen::VectorXd& features,
                       const NormalizationStats& stats) {
  if (features.size() == 0 || features.size() % 4 != 0) {
    Fail(ErrorCode::kInvalidArgument,
         "feature vector length must be a positive multiple of 4");
  }
  const int n = static_cast<int>(features.size() / 4);
  std::vector<Pose2> poses;
  poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double c = features[4 * i + 2];
    const double s = features[4 * i + 3];
    const double norm = std::hypot(c, s);
    double theta = 0.0;
    if (norm > 0.0 && std::isfinite(norm)) {
      theta = std::atan2(s / norm, c / norm);
    } else {
      spdlog::warn("degenerate heading encoding at pose {}; using 0", i);
    }
    poses.emplace_back(features[4 * i] * stats.xy_scale,
                       features[4 * i + 1] * stats.xy_scale, theta);
  }
  return Trajectory(std::move(poses));
}

Corrupted ForwardCorrupt(const Eigen::VectorXd& tau0, int k,
                         const NoiseSchedule& schedule, std::mt19937_64& rng) {
  CheckStep(k, schedule);
  std::normal_distribution<double> normal;
  Corrupted out;
  out.eps.resize(tau0.size());
  for (Eigen::Index i = 0; i < tau0.size(); ++i) out.eps[i] = normal(rng);
  const double abar = schedule.alpha_bar[k - 1];
  out.tau = std::sqrt(abar) * tau0 + std::sqrt(1.0 - abar) * out.eps;
  return out;
}

Eigen::VectorXd DenoiseStep(const Eigen::VectorXd& tau_k, int k,
                            const NoiseSchedule& schedule,
                            const Eigen::VectorXd& eps_hat,
                            std::mt19937_64& rng) {
  CheckStep(k, schedule);
  if (eps_hat.size() != tau_k.size()) {
    Fail(ErrorCode::kInvalidArgument, "eps_hat and tau sizes differ");
  }
  Eigen::VectorXd next =
      schedule.alpha[k - 1] * (tau_k - schedule.gamma[k - 1] * eps_hat);
  const double sigma = schedule.sigma[k - 1];
  if (sigma > 0.0) {
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < next.size(); ++i) {
      next[i] += sigma * normal(rng);
    }
  }
  return next;
}

}  // namespace dlm::diffusion
