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

#ifndef DLM_CHECKPOINT_H_
#define DLM_CHECKPOINT_H_

// Binary checkpoint layout (all integers little-endian):
//
//   bytes 0..7    magic "DLMCKPT\0"
//   bytes 8..11   u32 format version
//   bytes 12..19  u64 header length L
//   next L bytes  UTF-8 JSON header
//   remainder     tensor payload, float64 little-endian, row-major
//
// The header carries the model configuration, the vocabulary, the noise
// schedule, free-form training metadata and a tensor directory
// {name, rows, cols, offset} with offsets relative to the payload start,
// plus the payload length and its FNV-1a 64 hash.

#include <cstdint>
#include <string>
#include <vector>

#include "dlm/policy.h"
#include "json.hpp"

namespace dlm::io {

inline constexpr uint32_t kCheckpointVersion = 1;

struct TensorEntry {
  std::string name;
  int64_t rows = 0;
  int64_t cols = 0;
  uint64_t offset = 0;  // bytes into the payload
};

struct CheckpointInfo {
  uint32_t version = 0;
  ModelConfig model;
  text::Vocabulary vocabulary;
  nlohmann::json training;
  std::vector<TensorEntry> tensors;
  uint64_t payload_bytes = 0;
  std::string payload_hash;  // 16 hex digits
};

void SaveCheckpoint(const Policy& policy, const std::string& path,
                    const nlohmann::json& training = nlohmann::json::object());

// Throws kIo when unreadable, kCorrupt on truncation or damage,
// kIncompatible on a different format version.
Policy LoadCheckpoint(const std::string& path, CheckpointInfo* info = nullptr);

// Reads the header only.
CheckpointInfo InspectCheckpoint(const std::string& path);

// FNV-1a 64 of a byte string, as 16 hex digits.
std::string Fnv1aHex(std::string_view bytes);
// FNV-1a 64 of a whole file.
std::string FileHash(const std::string& path);

nlohmann::json ModelConfigToJson(const ModelConfig& config);
ModelConfig ModelConfigFromJson(const nlohmann::json& j);

}  // namespace dlm::io

#endif  // DLM_CHECKPOINT_H_
