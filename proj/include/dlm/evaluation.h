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

#ifndef DLM_EVALUATION_H_
#define DLM_EVALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dlm/augment.h"
#include "dlm/dataset.h"
#include "dlm/metrics.h"
#include "dlm/policy.h"
#include "json.hpp"

namespace dlm::eval {

// Endpoint threshold used for desk-scale success rates.
inline constexpr double kRelaxedThreshold = 0.5;

struct EvalOptions {
  int seeds = 1;           // sampling passes per command
  uint64_t seed = 0;
  double threshold = metrics::kSuccessThreshold;
};

struct Outcome {
  int index = 0;  // into the test set
  int pass = 0;   // seed pass
  metrics::EvalResult result;
  double latency_ms = 0.0;
};

struct Timing {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
};

struct EvalReport {
  metrics::Summary summary;               // over every outcome
  std::vector<metrics::Summary> per_pass;  // one per seed pass
  Timing timing;
  std::vector<Outcome> outcomes;
};

// Samples every command `seeds` times and scores it against its labeled
// trajectory. Per-sample seeds derive from (seed, pass, index).
EvalReport EvaluatePolicy(const Policy& policy, const io::Dataset& test,
                          const EvalOptions& options);

Timing ComputeTiming(std::vector<double> latencies_ms);

nlohmann::json SummaryToJson(const metrics::Summary& summary);
nlohmann::json ReportToJson(const EvalReport& report);

// Copy whose trajectories are the zero-noise execution of each parsed
// command. Unparseable samples are dropped.
io::Dataset WithIdealReferences(const io::Dataset& data);

// First-seen samples of each family, in dataset order.
io::Dataset FamilyOriginals(const io::Dataset& data);

// n paraphrases of training families drawn from the held-out grammar, none
// of which occurs verbatim among the training commands. References are
// ideal executions.
io::Dataset HeldOutParaphrases(const io::Dataset& train, int n, uint64_t seed);

// n corrupted variants of commands drawn from `source` (cycling through a
// seeded permutation; commands the mode cannot corrupt are skipped). Each
// keeps the reference trajectory of its source sample.
io::Dataset CorruptedSet(const io::Dataset& source, augment::CorruptionMode mode,
                         int n, uint64_t seed);

// Per-point mean and sample standard deviation over trajectories resampled
// to `points` poses in the start frame.
struct Band {
  std::vector<Pose2> mean;   // heading is the circular mean
  std::vector<double> xy_std;
  std::vector<double> heading_std;
};
Band TrajectoryBand(const std::vector<Trajectory>& trajectories,
                    int points = metrics::kComparePoints);

}  // namespace dlm::eval

#endif  // DLM_EVALUATION_H_
