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

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.h"
#include "test_util.h"

namespace dlm::metrics {
namespace {

TEST(EvaluateTest, IdenticalTrajectories) {
  const Trajectory t = testing::Line(22, 0.3);
  const EvalResult r = Evaluate(t, t);
  EXPECT_EQ(r.rmse_cm, 0.0);
  EXPECT_EQ(r.maoe_deg, 0.0);
  EXPECT_TRUE(r.success);
}

TEST(EvaluateTest, ConstantOffsetOfTenCentimeters) {
  const Trajectory line = testing::Line(22, 0.3);
  std::vector<Pose2> shifted;
  for (const Pose2& p : line.poses()) {
    shifted.emplace_back(p.x(), p.y() + 0.1, p.theta());
  }
  const EvalResult r = Evaluate(Trajectory(shifted), testing::Line(22, 0.3));
  EXPECT_NEAR(r.rmse_cm, 10.0, 1e-9);
  EXPECT_NEAR(r.endpoint_error_m, 0.1, 1e-12);
  // Success needs the endpoint strictly inside the threshold.
  EXPECT_FALSE(r.success);
}

TEST(EvaluateTest, QuarterTurnHeadingError) {
  const Trajectory ref = testing::Line(22, 0.3, 0.0);
  const Trajectory gen = testing::Line(22, 0.3, std::numbers::pi / 2);
  EXPECT_NEAR(Evaluate(gen, ref).maoe_deg, 90.0, 1e-9);
}

TEST(EvaluateTest, DifferentLengthsAreResampled) {
  const Trajectory a = testing::Line(5, 1.0);
  const Trajectory b = testing::Line(9, 0.5);
  const EvalResult r = Evaluate(a, b);
  EXPECT_NEAR(r.rmse_cm, 0.0, 1e-9);
  EXPECT_TRUE(r.success);
}

TEST(EvaluateTest, RejectsEmpty) {
  testing::ExpectError(ErrorCode::kInvalidArgument, [] {
    Evaluate(Trajectory(), testing::Line(3, 1.0));
  });
}

TEST(EvaluateTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const Trajectory gen = oracle::RandomPair(rng);
    const Trajectory ref = oracle::RandomPair(rng);
    const EvalResult a = Evaluate(gen, ref, 0.5);
    const EvalResult b = oracle::Evaluate(gen, ref, 0.5);
    EXPECT_NEAR(a.rmse_cm, b.rmse_cm, 1e-9);
    EXPECT_NEAR(a.maoe_deg, b.maoe_deg, 1e-9);
    EXPECT_NEAR(a.endpoint_error_m, b.endpoint_error_m, 1e-12);
    EXPECT_EQ(a.success, b.success);
  }
}

TEST(EvaluateTest, NonNegativeAndBounded) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 200; ++t) {
    const EvalResult r =
        Evaluate(oracle::RandomPair(rng), oracle::RandomPair(rng));
    EXPECT_GE(r.rmse_cm, 0.0);
    EXPECT_GE(r.maoe_deg, 0.0);
    EXPECT_LE(r.maoe_deg, 180.0);
  }
}

TEST(AggregateTest, Example) {
  std::vector<EvalResult> results(4);
  results[0] = {10.0, 1.0, true, 0.05};
  results[1] = {20.0, 2.0, true, 0.05};
  results[2] = {30.0, 3.0, false, 0.5};
  results[3] = {40.0, 4.0, true, 0.05};
  const Summary s = Aggregate(results);
  EXPECT_EQ(s.count, 4);
  EXPECT_DOUBLE_EQ(s.sr_percent, 75.0);
  EXPECT_DOUBLE_EQ(s.rmse_cm.mean, 25.0);
  EXPECT_NEAR(s.rmse_cm.std, oracle::MeanStd({10, 20, 30, 40}).std, 1e-12);
  EXPECT_DOUBLE_EQ(s.maoe_deg.mean, 2.5);
}

TEST(AggregateTest, SingleResultHasZeroStd) {
  const std::vector<EvalResult> one = {{12.0, 3.0, false, 1.0}};
  const Summary s = Aggregate(one);
  EXPECT_EQ(s.rmse_cm.std, 0.0);
  EXPECT_EQ(s.sr_percent, 0.0);
}

TEST(AggregateTest, RejectsEmpty) {
  testing::ExpectError(ErrorCode::kInvalidArgument,
                       [] { Aggregate(std::vector<EvalResult>{}); });
}

TEST(AggregateTest, MatchesOracle) {
  std::mt19937_64 rng(19);
  std::vector<EvalResult> results;
  std::vector<double> rmse, maoe;
  int ok = 0;
  for (int t = 0; t < 100; ++t) {
    results.push_back(
        Evaluate(oracle::RandomPair(rng), oracle::RandomPair(rng), 0.5));
    rmse.push_back(results.back().rmse_cm);
    maoe.push_back(results.back().maoe_deg);
    ok += results.back().success;
  }
  const Summary s = Aggregate(results);
  EXPECT_NEAR(s.sr_percent, ok, 1e-12);
  EXPECT_NEAR(s.rmse_cm.mean, oracle::MeanStd(rmse).mean, 1e-9);
  EXPECT_NEAR(s.rmse_cm.std, oracle::MeanStd(rmse).std, 1e-9);
  EXPECT_NEAR(s.maoe_deg.std, oracle::MeanStd(maoe).std, 1e-9);
}

}  // namespace
}  // namespace dlm::metrics
