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

#include "dlm/policy.h"

#include <gtest/gtest.h>

#include <cmath>

#include "dlm/synth.h"
#include "dlm/trainer.h"
#include "small_model.h"
#include "test_util.h"

namespace dlm {
namespace {

bool Finite(const Trajectory& t) {
  for (const Pose2& p : t.poses()) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) return false;
  }
  return true;
}

TEST(PolicyTest, UntrainedSamplingIsTotalAndDeterministic) {
  const Policy policy = testing::SmallPolicy();
  for (const char* command : {"Move forward 5 meters", "zzz qqq", "Turn left"}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const Generation g = policy.Sample(command, seed);
      EXPECT_EQ(g.full.size(), kHorizon);
      EXPECT_TRUE(Finite(g.full));
      EXPECT_GE(g.trajectory.size(), 1);
      EXPECT_LE(g.trajectory.size(), kHorizon);
      EXPECT_EQ(g.full[0], Pose2());
      const Generation again = policy.Sample(command, seed);
      EXPECT_EQ(g.full, again.full);
      EXPECT_EQ(g.trajectory, again.trajectory);
    }
  }
  EXPECT_NE(policy.Sample("Move forward 5 meters", 1).full,
            policy.Sample("Move forward 5 meters", 2).full);
}

TEST(PolicyTest, BatchMatchesSingleSamples) {
  const Policy policy = testing::SmallPolicy();
  const std::vector<std::string> commands = {"Move forward 2 meters",
                                             "Turn slightly right", "Go back"};
  const std::vector<uint64_t> seeds = {4, 5, 6};
  const auto batch = policy.SampleBatch(commands, seeds);
  ASSERT_EQ(batch.size(), 3u);
  // Same draws; only float summation order differs with the batch size.
  for (int i = 0; i < 3; ++i) {
    const Trajectory single = policy.Sample(commands[i], seeds[i]).full;
    for (int j = 0; j < kHorizon; ++j) {
      EXPECT_LT(PlanarDistance(batch[i].full[j], single[j]), 1e-3);
    }
  }
}

TEST(PolicyTest, AtldToggle) {
  const io::Dataset data = synth::GenerateDataset(20, {}, 9);
  ModelConfig m = testing::SmallModel();
  m.use_atld = false;
  const Policy policy(m, BuildVocabulary(data, m));
  const Generation g = policy.Sample("Move forward 2 meters", 3);
  EXPECT_EQ(g.trajectory.size(), kHorizon);
  EXPECT_EQ(g.trajectory, g.full);
}

TEST(PolicyTest, EmptyCommand) {
  const Policy policy = testing::SmallPolicy();
  testing::ExpectError(ErrorCode::kEmptyCommand,
                       [&] { policy.Sample("  ", 1); });
  testing::ExpectError(ErrorCode::kEmptyCommand,
                       [&] { policy.Sample("!!", 1); });
}

TEST(PolicyTest, StandardizationToggle) {
  EXPECT_EQ(PrepareCommand("Advance FIVE metres", true), "move 5 meters");
  EXPECT_EQ(PrepareCommand("Advance FIVE metres", false),
            "advance five metres");
}

TEST(LearningRateTest, WarmupThenConstant) {
  TrainConfig t;
  EXPECT_DOUBLE_EQ(LearningRate(t, 0, 1000), 1e-4);
  EXPECT_NEAR(LearningRate(t, 50, 1000), 1e-4 + 0.5 * (2e-3 - 1e-4), 1e-15);
  EXPECT_DOUBLE_EQ(LearningRate(t, 100, 1000), 2e-3);
  EXPECT_DOUBLE_EQ(LearningRate(t, 999, 1000), 2e-3);
  double previous = 0.0;
  for (int s = 0; s < 1000; ++s) {
    EXPECT_GE(LearningRate(t, s, 1000), previous);
    previous = LearningRate(t, s, 1000);
  }
}

TEST(TrainTest, IdenticalSeedsGiveIdenticalRuns) {
  const io::Dataset data = synth::GenerateDataset(100, {}, 91);
  TrainConfig t;
  t.epochs = 2;
  t.batch_size = 16;
  t.seed = 5;
  t.validation_samples = 4;
  TrainHistory a, b;
  const Policy pa = Train(data, testing::SmallModel(), t, &a);
  const Policy pb = Train(data, testing::SmallModel(), t, &b);
  ASSERT_EQ(a.step_losses.size(), b.step_losses.size());
  EXPECT_NEAR(a.epochs.back().loss, b.epochs.back().loss, 1e-6);
  EXPECT_EQ(a.step_losses, b.step_losses);
  EXPECT_EQ(pa.Sample("Move forward 2 meters", 1).full,
            pb.Sample("Move forward 2 meters", 1).full);
}

TEST(TrainTest, MemorizesSingleSample) {
  const io::Dataset data = synth::GenerateDataset(1, {}, 92);
  TrainConfig t;
  t.epochs = 200;
  t.max_steps = 200;
  t.validation_samples = 0;
  TrainHistory history;
  ModelConfig full_size;
  full_size.seed = 3;
  Train(data, full_size, t, &history);
  ASSERT_EQ(history.step_losses.size(), 200u);
  // Per-step losses are noisy (random step per copy), so average the tail.
  double tail = 0.0;
  for (size_t i = 190; i < 200; ++i) tail += history.step_losses[i];
  EXPECT_LT(tail / 10, 0.05);
}

TEST(TrainTest, LossFallsOverEpochs) {
  const io::Dataset data = synth::GenerateDataset(400, {}, 93);
  TrainConfig t;
  t.epochs = 5;
  t.validation_samples = 8;
  TrainHistory history;
  std::vector<int> seen;
  Train(data, testing::SmallModel(), t, &history,
        [&](const EpochStats& s) { seen.push_back(s.epoch); });
  ASSERT_EQ(history.epochs.size(), 5u);
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_LT(history.epochs[4].loss, history.epochs[0].loss);
  EXPECT_GT(history.epochs[4].val_rmse_cm, 0.0);
}

TEST(TrainTest, DivergenceAbortsWithNumericError) {
  const io::Dataset data = synth::GenerateDataset(20, {}, 94);
  TrainConfig t;
  t.lr_start = t.lr_peak = 1e30;
  t.grad_clip = 0.0;
  t.max_steps = 20;
  t.validation_samples = 0;
  testing::ExpectError(ErrorCode::kNumeric,
                       [&] { Train(data, testing::SmallModel(), t); });
}

TEST(TrainTest, RejectsEmptyData) {
  testing::ExpectError(ErrorCode::kInvalidArgument,
                       [] { Train({}, testing::SmallModel(), {}); });
}

}  // namespace
}  // namespace dlm
