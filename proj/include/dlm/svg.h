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

#ifndef DLM_SVG_H_
#define DLM_SVG_H_

#include <optional>
#include <string>
#include <vector>

#include "dlm/evaluation.h"
#include "dlm/geometry.h"

namespace dlm {

// Standalone SVG plot of start-frame paths with heading arrows at every
// pose. With a band, the mean path is drawn in black over a shaded
// mean +- std corridor.
std::string RenderSvg(const std::vector<Trajectory>& trajectories,
                      const std::optional<eval::Band>& band = std::nullopt,
                      const std::string& title = "");

}  // namespace dlm

#endif  // DLM_SVG_H_
