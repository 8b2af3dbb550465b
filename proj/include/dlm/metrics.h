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

#ifndef DLM_METRICS_H_
#define DLM_METRICS_H_

#include <span>

#include "dlm/geometry.h"

namespace dlm::metrics {

// Number of arc-length resampled points compared by RMSE and MAOE.
inline constexpr int kComparePoints = 22;
// Endpoint radius for target-reach success, meters.
inline constexpr double kSuccessThreshold = 0.10;

struct EvalResult {
  double rmse_cm = 0.0;
  double maoe_deg = 0.0;
  bool success = false;
  double endpoint_error_m = 0.0;
};

// Compares a generated trajectory against a reference expressed in the same
// frame. Success is strict: endpoint error < threshold.
EvalResult Evaluate(const Trajectory& generated, const Trajectory& reference,
                    double success_threshold = kSuccessThreshold);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

struct Summary {
  int count = 0;
  double sr_percent = 0.0;
  MeanStd rmse_cm;
  MeanStd maoe_deg;
  MeanStd endpoint_error_m;
};

// Throws kInvalidArgument on an empty list.
Summary Aggregate(std::span<const EvalResult> results);

MeanStd ComputeMeanStd(std::span<const double> values);

}  // namespace dlm::metrics

#endif  // DLM_METRICS_H_
