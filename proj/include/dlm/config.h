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

#ifndef DLM_CONFIG_H_
#define DLM_CONFIG_H_

// INI-style configuration ("key = value" lines under [section] headers).
//
//   [model]  encoder, encoder_dim, encoder_layers, encoder_heads, max_len,
//            width, blocks, heads, ff_mult, diffusion_steps, xy_scale,
//            standardize, atld, atld_window, atld_epsilon, seed
//   [train]  epochs, batch_size, lr_start, lr_peak, warmup_fraction,
//            weight_decay, grad_clip, seed, max_steps, validation_samples
//
// Keys that are present override the corresponding settings; unknown keys
// are rejected so typos do not pass silently.

#include <string>

#include "dlm/policy.h"
#include "dlm/synth.h"
#include "dlm/trainer.h"
#include "json.hpp"

namespace dlm {

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

// Throws kIo when unreadable, kParse on malformed syntax, kSchema on unknown
// keys or bad values.
void ApplyConfigFile(const std::string& path, RunConfig* config);
// Same, from text.
void ApplyConfigText(const std::string& text, RunConfig* config);

// INI text reproducing `config`.
std::string ConfigToIni(const RunConfig& config);
nlohmann::json ConfigToJson(const RunConfig& config);
// FNV-1a of the canonical JSON form.
std::string ConfigHash(const RunConfig& config);

// "default", "none" or "high".
synth::DriverNoise NoiseProfile(const std::string& name);

text::EncoderKind ParseEncoderKind(const std::string& name);
std::string EncoderKindFlag(text::EncoderKind kind);

}  // namespace dlm

#endif  // DLM_CONFIG_H_
