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

#ifndef DLM_DIFFUSION_H_
#define DLM_DIFFUSION_H_

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "dlm/geometry.h"

namespace dlm::diffusion {

inline constexpr int kDefaultSteps = 50;
inline constexpr double kBetaStart = 1e-4;
inline constexpr double kBetaEnd = 0.02;

// DDPM coefficients for the update
//   tau_{k-1} = alpha_k (tau_k - gamma_k eps_hat) + sigma_k z.
// Step k runs from `steps` (pure noise) down to 1 (clean); every vector is
// indexed by k - 1.
struct NoiseSchedule {
  int steps = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;  // prod_{j<=k} (1 - beta_j)
  std::vector<double> alpha;      // 1 / sqrt(1 - beta_k)
  std::vector<double> gamma;      // beta_k / sqrt(1 - alpha_bar_k)
  std::vector<double> sigma;      // sqrt(beta_k), 0 at k = 1
};

// Linear beta from 1e-4 to 0.02. Throws kInvalidArgument when steps < 2.
NoiseSchedule MakeSchedule(int steps);

struct NormalizationStats {
  double xy_scale = 8.0;  // arena half-extent, meters

  bool operator==(const NormalizationStats&) const = default;
};

// Per pose (x/scale, y/scale, cos theta, sin theta). Positions beyond twice
// the scale are clamped with a warning.
Eigen::VectorXd Normalize(const Trajectory& traj,
                          const NormalizationStats& stats);

// Inverse of Normalize. The (cos, sin) pair is projected onto the unit circle
// before atan2; a zero pair decodes to heading 0 with a warning.
Trajectory Denormalize(const Eigen::VectorXd& features,
                       const NormalizationStats& stats);

struct Corrupted {
  Eigen::VectorXd tau;
  Eigen::VectorXd eps;
};

// tau_k = sqrt(abar_k) tau0 + sqrt(1 - abar_k) eps, eps ~ N(0, I).
Corrupted ForwardCorrupt(const Eigen::VectorXd& tau0, int k,
                         const NoiseSchedule& schedule, std::mt19937_64& rng);

// One reverse step from k to k - 1. Noise is drawn only when sigma_k > 0.
Eigen::VectorXd DenoiseStep(const Eigen::VectorXd& tau_k, int k,
                            const NoiseSchedule& schedule,
                            const Eigen::VectorXd& eps_hat,
                            std::mt19937_64& rng);

}  // namespace dlm::diffusion

#endif  // DLM_DIFFUSION_H_
