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

#include "dlm/atld.h"

#include <string>
#include <vector>

#include "dlm/error.h"

namespace dlm::atld {

LengthResult DetermineLength(const Trajectory& traj, const AtldConfig& cfg) {
  const int horizon = traj.size();
  if (cfg.window < 1 || !(cfg.epsilon > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "atld needs window >= 1, epsilon > 0");
  }
  if (horizon < cfg.window + 1) {
    Fail(ErrorCode::kInvalidArgument,
         "atld needs at least " + std::to_string(cfg.window + 1) +
             " poses, got " + std::to_string(horizon));
  }
  // 0-based j corresponds to 1-based i = j + 1.
  int len = horizon;
  for (int j = horizon - 1; j >= cfg.window; --j) {
    if (Se2Distance(traj[j], traj[j - cfg.window]) >= cfg.epsilon) break;
    len = j + 1;
  }
  std::vector<Pose2> poses(traj.poses().begin(), traj.poses().begin() + len);
  return {len, Trajectory(std::move(poses))};
}

}  // namespace dlm::atld
