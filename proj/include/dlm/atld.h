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

#ifndef DLM_ATLD_H_
#define DLM_ATLD_H_

#include "dlm/geometry.h"

namespace dlm::atld {

struct AtldConfig {
  int window = 7;          // lambda, in points
  double epsilon = 0.03;   // SE(2) displacement threshold

  bool operator==(const AtldConfig&) const = default;
};

struct LengthResult {
  int active_len = 0;
  Trajectory trajectory;  // truncated to active_len poses
};

// Adaptive trajectory length: with d_i = |x_i - x_{i-window}| (SE(2) norm,
// 1-based i in (window, H]), the active length is the first index of the
// longest suffix on which every d_i < epsilon, or H when the last d_i is
// not below epsilon. Throws kInvalidArgument when the trajectory has fewer
// than window + 1 poses or the config is out of range.
LengthResult DetermineLength(const Trajectory& traj, const AtldConfig& cfg);

}  // namespace dlm::atld

#endif  // DLM_ATLD_H_
