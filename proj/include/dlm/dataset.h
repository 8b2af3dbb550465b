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

#ifndef DLM_DATASET_H_
#define DLM_DATASET_H_

#include <string>
#include <string_view>
#include <vector>

#include "dlm/geometry.h"

namespace dlm::io {

enum class SampleSource { kHumanSim, kSynthetic, kAugmented };

std::string_view SourceName(SampleSource source);
SampleSource ParseSource(std::string_view name);

// One labeled (command, trajectory) pair. Paraphrases of one original share
// its family_id and its trajectory.
struct Sample {
  std::string command;
  Trajectory trajectory;  // kHorizon stored poses, active prefix
  SampleSource source = SampleSource::kHumanSim;
  int family_id = 0;

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::vector<Sample> samples;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  bool operator==(const Dataset&) const = default;
};

// JSON-lines, one sample object per line with the fields command,
// trajectory ([[x, y, theta], ...] with kHorizon rows), active_len, source,
// family_id. Doubles are written in shortest round-trip form, so a
// write/read cycle is bit-exact.
std::string SampleToJsonLine(const Sample& sample);
// `line_no` is used in error messages only.
Sample SampleFromJsonLine(std::string_view line, int line_no);

void WriteDataset(const Dataset& dataset, const std::string& path);
// Throws kSchema (bad fields) or kParse (bad JSON) naming the line number.
Dataset ReadDataset(const std::string& path);

}  // namespace dlm::io

#endif  // DLM_DATASET_H_
