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

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlm/checkpoint.h"
#include "dlm/config.h"
#include "dlm/dataset.h"
#include "dlm/synth.h"
#include "small_model.h"
#include "test_util.h"

namespace dlm::io {
namespace {

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void Spit(const std::string& path, const std::string& bytes) {
  std::ofstream(path, std::ios::binary) << bytes;
}

TEST(DatasetTest, EmptyRoundTrip) {
  testing::TempDir dir;
  WriteDataset({}, dir.File("empty.jsonl"));
  EXPECT_EQ(std::filesystem::file_size(dir.File("empty.jsonl")), 0u);
  EXPECT_TRUE(ReadDataset(dir.File("empty.jsonl")).empty());
}

TEST(DatasetTest, BitExactRoundTrip) {
  testing::TempDir dir;
  Dataset data = synth::GenerateDataset(200, {}, 81);
  data.samples[3].source = SampleSource::kAugmented;
  data.samples[4].source = SampleSource::kSynthetic;
  data.samples[5].command = "Say \"hi\" \\ then go 2 m ahead";
  WriteDataset(data, dir.File("d.jsonl"));
  const Dataset back = ReadDataset(dir.File("d.jsonl"));
  ASSERT_EQ(back.size(), data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const auto& a = data.samples[i].trajectory;
    const auto& b = back.samples[i].trajectory;
    for (int j = 0; j < a.size(); ++j) {
      // Bitwise, not approximate.
      EXPECT_EQ(std::memcmp(&a[j], &b[j], sizeof(Pose2)), 0);
    }
  }
  EXPECT_EQ(back, data);
  WriteDataset(back, dir.File("e.jsonl"));
  EXPECT_EQ(Slurp(dir.File("d.jsonl")), Slurp(dir.File("e.jsonl")));
}

TEST(DatasetTest, FieldNames) {
  const Dataset data = synth::GenerateDataset(1, {}, 82);
  const auto j = nlohmann::json::parse(SampleToJsonLine(data.samples[0]));
  for (const char* key :
       {"command", "trajectory", "active_len", "source", "family_id"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["trajectory"].size(), static_cast<size_t>(kHorizon));
  EXPECT_EQ(j["trajectory"][0].size(), 3u);
}

TEST(DatasetTest, WrongRowCountIsSchemaErrorAtLineOne) {
  testing::TempDir dir;
  nlohmann::json j = nlohmann::json::parse(
      SampleToJsonLine(synth::GenerateDataset(1, {}, 83).samples[0]));
  j["trajectory"].erase(j["trajectory"].size() - 1);
  Spit(dir.File("bad.jsonl"), j.dump() + "\n");
  try {
    ReadDataset(dir.File("bad.jsonl"));
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos)
        << e.what();
  }
}

TEST(DatasetTest, MalformedLineNamesLine) {
  testing::TempDir dir;
  const std::string good =
      SampleToJsonLine(synth::GenerateDataset(1, {}, 84).samples[0]);
  Spit(dir.File("bad.jsonl"), good + "\n" + good + "\n{not json\n");
  try {
    ReadDataset(dir.File("bad.jsonl"));
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
  testing::ExpectError(ErrorCode::kIo,
                       [&] { ReadDataset(dir.File("missing.jsonl")); });
}

TEST(CheckpointTest, RoundTripSamplesBitIdentically) {
  testing::TempDir dir;
  const Policy policy = testing::SmallPolicy();
  SaveCheckpoint(policy, dir.File("m.ckpt"), {{"epochs", 3}});
  CheckpointInfo info;
  const Policy loaded = LoadCheckpoint(dir.File("m.ckpt"), &info);
  EXPECT_EQ(loaded.config(), policy.config());
  EXPECT_EQ(loaded.vocabulary(), policy.vocabulary());
  EXPECT_EQ(info.training["epochs"], 3);
  EXPECT_EQ(info.version, kCheckpointVersion);
  for (uint64_t seed : {0ull, 1ull, 99ull}) {
    const Generation a = policy.Sample("Move forward 3 meters", seed);
    const Generation b = loaded.Sample("Move forward 3 meters", seed);
    EXPECT_EQ(a.full, b.full);
    EXPECT_EQ(a.trajectory, b.trajectory);
  }
  SaveCheckpoint(loaded, dir.File("again.ckpt"), {{"epochs", 3}});
  EXPECT_EQ(Slurp(dir.File("m.ckpt")), Slurp(dir.File("again.ckpt")));
}

TEST(CheckpointTest, InspectReadsHeaderOnly) {
  testing::TempDir dir;
  const Policy policy = testing::SmallPolicy();
  SaveCheckpoint(policy, dir.File("m.ckpt"));
  const std::string bytes = Slurp(dir.File("m.ckpt"));
  // Header inspection survives a missing payload.
  const CheckpointInfo full = InspectCheckpoint(dir.File("m.ckpt"));
  Spit(dir.File("head.ckpt"), bytes.substr(0, bytes.size() - full.payload_bytes));
  const CheckpointInfo info = InspectCheckpoint(dir.File("head.ckpt"));
  EXPECT_EQ(info.model, policy.config());
  EXPECT_FALSE(info.tensors.empty());
  EXPECT_EQ(info.payload_hash.size(), 16u);
}

TEST(CheckpointTest, TruncatedOrDamagedFilesAreCorrupt) {
  testing::TempDir dir;
  SaveCheckpoint(testing::SmallPolicy(), dir.File("m.ckpt"));
  const std::string bytes = Slurp(dir.File("m.ckpt"));
  for (size_t cut : {size_t{4}, size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    Spit(dir.File("t.ckpt"), bytes.substr(0, cut));
    testing::ExpectError(ErrorCode::kCorrupt,
                         [&] { LoadCheckpoint(dir.File("t.ckpt")); });
  }
  std::string flipped = bytes;
  flipped[flipped.size() - 3] ^= 0x40;
  Spit(dir.File("f.ckpt"), flipped);
  testing::ExpectError(ErrorCode::kCorrupt,
                       [&] { LoadCheckpoint(dir.File("f.ckpt")); });
  testing::ExpectError(ErrorCode::kIo,
                       [&] { LoadCheckpoint(dir.File("missing.ckpt")); });
}

TEST(CheckpointTest, VersionMismatchIsIncompatible) {
  testing::TempDir dir;
  SaveCheckpoint(testing::SmallPolicy(), dir.File("m.ckpt"));
  std::string bytes = Slurp(dir.File("m.ckpt"));
  const uint32_t future = kCheckpointVersion + 1;
  std::memcpy(bytes.data() + 8, &future, sizeof(future));
  Spit(dir.File("v.ckpt"), bytes);
  testing::ExpectError(ErrorCode::kIncompatible,
                       [&] { LoadCheckpoint(dir.File("v.ckpt")); });
}

TEST(HashTest, KnownFnv1aValues) {
  EXPECT_EQ(Fnv1aHex(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1aHex("a"), "af63dc4c8601ec8c");
}

TEST(ConfigTest, DefaultsMatchTrainingRecipe) {
  const RunConfig c;
  EXPECT_EQ(c.train.epochs, 30);
  EXPECT_EQ(c.train.batch_size, 64);
  EXPECT_EQ(c.train.lr_start, 1e-4);
  EXPECT_EQ(c.train.lr_peak, 2e-3);
  EXPECT_EQ(c.train.weight_decay, 1.25e-6);
  EXPECT_EQ(c.model.atld.window, 7);
  EXPECT_EQ(c.model.atld.epsilon, 0.03);
  EXPECT_EQ(c.model.diffusion_steps, 50);
}

TEST(ConfigTest, IniRoundTrip) {
  RunConfig c;
  c.model.encoder.kind = text::EncoderKind::kBagOfWords;
  c.model.use_atld = false;
  c.model.atld.epsilon = 0.0123456789;
  c.train.epochs = 4;
  c.train.seed = 17;
  RunConfig back;
  ApplyConfigText(ConfigToIni(c), &back);
  EXPECT_EQ(back.model, c.model);
  EXPECT_EQ(ConfigHash(back), ConfigHash(c));
  EXPECT_NE(ConfigHash(back), ConfigHash(RunConfig{}));
}

TEST(ConfigTest, PartialOverride) {
  RunConfig c;
  ApplyConfigText("[train]\nepochs = 3\n\n[model]\natld = off\n", &c);
  EXPECT_EQ(c.train.epochs, 3);
  EXPECT_FALSE(c.model.use_atld);
  EXPECT_EQ(c.train.batch_size, 64);
}

TEST(ConfigTest, Errors) {
  RunConfig c;
  testing::ExpectError(ErrorCode::kSchema,
                       [&] { ApplyConfigText("[train]\nepoch = 3\n", &c); });
  testing::ExpectError(ErrorCode::kSchema,
                       [&] { ApplyConfigText("[train]\nepochs = x\n", &c); });
  testing::ExpectError(ErrorCode::kSchema, [&] {
    ApplyConfigText("[model]\nencoder = gpt\n", &c);
  });
  testing::ExpectError(ErrorCode::kParse,
                       [&] { ApplyConfigText("[train\nepochs = 3\n", &c); });
  testing::ExpectError(ErrorCode::kIo,
                       [&] { ApplyConfigFile("/nonexistent/x.ini", &c); });
}

}  // namespace
}  // namespace dlm::io
