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

#include "dlm/metrics.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "dlm/error.h"

namespace dlm::metrics {

EvalResult Evaluate(const Trajectory& generated, const Trajectory& reference,
                    double success_threshold) {
  if (generated.empty() || reference.empty()) {
    Fail(ErrorCode::kInvalidArgument, "evaluate needs non-empty trajectories");
  }
  const Trajectory gen = Resample(generated, kComparePoints);
  const Trajectory ref = Resample(reference, kComparePoints);

  double squared = 0.0;
  double angular = 0.0;
  for (int i = 0; i < kComparePoints; ++i) {
    const double d = PlanarDistance(gen[i], ref[i]);
    squared += d * d;
    angular += AngularDifference(gen[i].theta(), ref[i].theta());
  }
  EvalResult result;
  result.rmse_cm = 100.0 * std::sqrt(squared / kComparePoints);
  result.maoe_deg = (180.0 / std::numbers::pi) * angular / kComparePoints;
  result.endpoint_error_m = PlanarDistance(generated.back(), reference.back());
  result.success = result.endpoint_error_m < success_threshold;
  return result;
}

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (values.size() - 1));
  }
  return out;
}

Summary Aggregate(std::span<const EvalResult> results) {
  if (results.empty()) {
    Fail(ErrorCode::kInvalidArgument, "aggregate of an empty result list");
  }
  std::vector<double> rmse, maoe, endpoint;
  int successes = 0;
  for (const EvalResult& r : results) {
    rmse.push_back(r.rmse_cm);
    maoe.push_back(r.maoe_deg);
    endpoint.push_back(r.endpoint_error_m);
    if (r.success) ++successes;
  }
  Summary s;
  s.count = static_cast<int>(results.size());
  s.sr_percent = 100.0 * successes / s.count;
  s.rmse_cm = ComputeMeanStd(rmse);
  s.maoe_deg = ComputeMeanStd(maoe);
  s.endpoint_error_m = ComputeMeanStd(endpoint);
  return s;
}

}  // namespace dlm::metrics
