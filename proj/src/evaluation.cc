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

#include "dlm/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "dlm/error.h"
#include "dlm/synth.h"

namespace dlm::eval {

namespace {

using nlohmann::json;

std::string Key(std::string_view command) {
  std::string key;
  for (char c : command) {
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return key;
}

double Percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json MeanStdToJson(const metrics::MeanStd& m) {
  return {{"mean", m.mean}, {"std", m.std}};
}

}  // namespace

EvalReport EvaluatePolicy(const Policy& policy, const io::Dataset& test,
                          const EvalOptions& options) {
  if (test.empty()) Fail(ErrorCode::kInvalidArgument, "test set is empty");
  if (options.seeds < 1) Fail(ErrorCode::kInvalidArgument, "seeds must be >= 1");
  EvalReport report;
  std::vector<metrics::EvalResult> all;
  std::vector<double> latencies;
  const auto n = static_cast<uint64_t>(test.size());
  for (int pass = 0; pass < options.seeds; ++pass) {
    std::vector<metrics::EvalResult> pass_results;
    for (uint64_t i = 0; i < n; ++i) {
      const io::Sample& sample = test.samples[i];
      const uint64_t seed =
          synth::DerivedRng(options.seed, static_cast<uint64_t>(pass) * n + i)();
      const auto started = std::chrono::steady_clock::now();
      const Generation g = policy.Sample(sample.command, seed);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
      Outcome o;
      o.index = static_cast<int>(i);
      o.pass = pass;
      o.result =
          metrics::Evaluate(g.trajectory, sample.trajectory, options.threshold);
      o.latency_ms = ms;
      report.outcomes.push_back(o);
      pass_results.push_back(o.result);
      all.push_back(o.result);
      latencies.push_back(ms);
    }
    report.per_pass.push_back(metrics::Aggregate(pass_results));
  }
  report.summary = metrics::Aggregate(all);
  report.timing = ComputeTiming(std::move(latencies));
  return report;
}

Timing ComputeTiming(std::vector<double> latencies_ms) {
  Timing t;
  if (latencies_ms.empty()) return t;
  std::sort(latencies_ms.begin(), latencies_ms.end());
  t.mean_ms = std::accumulate(latencies_ms.begin(), latencies_ms.end(), 0.0) /
              static_cast<double>(latencies_ms.size());
  t.p50_ms = Percentile(latencies_ms, 0.50);
  t.p90_ms = Percentile(latencies_ms, 0.90);
  t.p99_ms = Percentile(latencies_ms, 0.99);
  return t;
}

json SummaryToJson(const metrics::Summary& s) {
  return {{"count", s.count},
          {"sr_percent", s.sr_percent},
          {"rmse_cm", MeanStdToJson(s.rmse_cm)},
          {"maoe_deg", MeanStdToJson(s.maoe_deg)},
          {"endpoint_error_m", MeanStdToJson(s.endpoint_error_m)}};
}

json ReportToJson(const EvalReport& report) {
  json per_pass = json::array();
  std::vector<double> sr;
  for (const auto& s : report.per_pass) {
    per_pass.push_back(SummaryToJson(s));
    sr.push_back(s.sr_percent);
  }
  return {{"summary", SummaryToJson(report.summary)},
          {"sr_percent_over_passes", MeanStdToJson(metrics::ComputeMeanStd(sr))},
          {"per_pass", std::move(per_pass)},
          {"inference_ms",
           {{"mean", report.timing.mean_ms},
            {"p50", report.timing.p50_ms},
            {"p90", report.timing.p90_ms},
            {"p99", report.timing.p99_ms}}}};
}

io::Dataset WithIdealReferences(const io::Dataset& data) {
  io::Dataset out;
  for (const io::Sample& s : data.samples) {
    try {
      io::Sample copy = s;
      copy.trajectory = synth::IdealTrajectory(synth::ParseCommand(s.command));
      out.samples.push_back(std::move(copy));
    } catch (const Error&) {
    }
  }
  return out;
}

io::Dataset FamilyOriginals(const io::Dataset& data) {
  io::Dataset out;
  std::set<int> seen;
  for (const io::Sample& s : data.samples) {
    if (seen.insert(s.family_id).second) out.samples.push_back(s);
  }
  return out;
}

io::Dataset HeldOutParaphrases(const io::Dataset& train, int n,
                               uint64_t seed) {
  std::unordered_set<std::string> used;
  for (const io::Sample& s : train.samples) used.insert(Key(s.command));
  io::Dataset originals = FamilyOriginals(train);
  std::mt19937_64 rng(seed);
  std::shuffle(originals.samples.begin(), originals.samples.end(), rng);

  io::Dataset out;
  const auto& grammar = augment::ParaphraseGrammar::HeldOut();
  bool progress = true;
  while (static_cast<int>(out.size()) < n && progress) {
    progress = false;
    for (const io::Sample& original : originals.samples) {
      if (static_cast<int>(out.size()) >= n) break;
      synth::CommandSpec spec;
      try {
        spec = synth::ParseCommand(original.command);
      } catch (const Error&) {
        continue;
      }
      std::vector<std::string> candidates;
      for (std::string& c : augment::EnumerateParaphrases(spec, grammar)) {
        if (!used.contains(Key(c))) candidates.push_back(std::move(c));
      }
      if (candidates.empty()) continue;
      std::string& text = candidates[std::uniform_int_distribution<size_t>(
          0, candidates.size() - 1)(rng)];
      used.insert(Key(text));
      io::Sample sample;
      sample.command = std::move(text);
      sample.trajectory = synth::IdealTrajectory(spec);
      sample.source = io::SampleSource::kAugmented;
      sample.family_id = original.family_id;
      out.samples.push_back(std::move(sample));
      progress = true;
    }
  }
  return out;
}

io::Dataset CorruptedSet(const io::Dataset& source, augment::CorruptionMode mode,
                         int n, uint64_t seed) {
  std::vector<size_t> order(source.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  io::Dataset out;
  bool progress = true;
  while (static_cast<int>(out.size()) < n && progress) {
    progress = false;
    for (size_t idx : order) {
      if (static_cast<int>(out.size()) >= n) break;
      io::Sample sample = source.samples[idx];
      try {
        sample.command = augment::Corrupt(sample.command, mode, rng);
        PrepareCommand(sample.command, true);
      } catch (const Error&) {
        continue;
      }
      out.samples.push_back(std::move(sample));
      progress = true;
    }
  }
  return out;
}

Band TrajectoryBand(const std::vector<Trajectory>& trajectories, int points) {
  if (trajectories.empty()) {
    Fail(ErrorCode::kInvalidArgument, "band needs at least one trajectory");
  }
  std::vector<Trajectory> resampled;
  for (const Trajectory& t : trajectories) {
    resampled.push_back(Resample(ToStartFrame(t), points));
  }
  const auto count = static_cast<double>(resampled.size());
  Band band;
  for (int i = 0; i < points; ++i) {
    double mx = 0.0, my = 0.0, mc = 0.0, ms = 0.0;
    for (const Trajectory& t : resampled) {
      mx += t[i].x();
      my += t[i].y();
      mc += std::cos(t[i].theta());
      ms += std::sin(t[i].theta());
    }
    mx /= count;
    my /= count;
    const double heading = std::atan2(ms, mc);
    double vxy = 0.0, vh = 0.0;
    for (const Trajectory& t : resampled) {
      vxy += std::pow(t[i].x() - mx, 2) + std::pow(t[i].y() - my, 2);
      vh += std::pow(AngularDifference(t[i].theta(), heading), 2);
    }
    const double denom = count > 1 ? count - 1 : 1.0;
    band.mean.emplace_back(mx, my, heading);
    band.xy_std.push_back(std::sqrt(vxy / denom));
    band.heading_std.push_back(std::sqrt(vh / denom));
  }
  return band;
}

}  // namespace dlm::eval
