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

#ifndef DLM_POLICY_H_
#define DLM_POLICY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlm/atld.h"
#include "dlm/diffusion.h"
#include "dlm/encoder.h"
#include "dlm/geometry.h"
#include "dlm/noise_net.h"
#include "dlm/vocabulary.h"

namespace dlm {

// Scalar type of trained networks.
using Real = float;

struct ModelConfig {
  text::EncoderConfig encoder;  // vocab_size is taken from the vocabulary
  diffusion::NoiseNetConfig net;
  int diffusion_steps = diffusion::kDefaultSteps;
  diffusion::NormalizationStats stats;
  bool standardize = true;  // false: lowercase and strip punctuation only
  bool use_atld = true;     // false: outputs keep all kHorizon poses
  atld::AtldConfig atld;
  uint64_t seed = 0;        // parameter initialization

  bool operator==(const ModelConfig&) const = default;
};

// Generated trajectory before and after length determination.
struct Generation {
  Trajectory full;        // kHorizon poses in the start frame
  Trajectory trajectory;  // active prefix selected by ATLD
};

// Text-conditioned diffusion policy: command encoder, noise predictor,
// vocabulary and schedule. Sampling is const and safe to call concurrently.
class Policy {
 public:
  Policy(const ModelConfig& config, text::Vocabulary vocabulary);

  const ModelConfig& config() const { return config_; }
  const text::Vocabulary& vocabulary() const { return vocabulary_; }
  const diffusion::NoiseSchedule& schedule() const { return schedule_; }

  // Text the encoder sees for `raw`. Throws kEmptyCommand.
  std::string Prepare(std::string_view raw) const;
  std::vector<int> Tokens(std::string_view raw) const;

  // Pooled command embeddings, one row per command.
  nn::Matrix<Real> Embed(std::span<const std::string> commands) const;

  // Noise prediction for a batch at a common step.
  nn::Matrix<Real> PredictNoise(const nn::Matrix<Real>& pooled,
                                const nn::Matrix<Real>& tau, int k) const;

  // Reverse diffusion from Gaussian noise. Each item draws its noise from a
  // generator seeded with its own seed, so results depend only on
  // (command, seed) within a batch of the same composition.
  Generation Sample(std::string_view command, uint64_t seed) const;
  std::vector<Generation> SampleBatch(std::span<const std::string> commands,
                                      std::span<const uint64_t> seeds) const;

  text::Encoder<Real>& encoder() { return encoder_; }
  const text::Encoder<Real>& encoder() const { return encoder_; }
  diffusion::NoiseNet<Real>& net() { return net_; }
  const diffusion::NoiseNet<Real>& net() const { return net_; }

  // Every parameter tensor with its stable name.
  template <typename F>
  void Visit(F&& fn) {
    encoder_.Visit("encoder", fn);
    net_.Visit("net", fn);
  }

 private:
  ModelConfig config_;
  text::Vocabulary vocabulary_;
  diffusion::NoiseSchedule schedule_;
  text::Encoder<Real> encoder_;
  diffusion::NoiseNet<Real> net_;
};

// Text the encoder sees: the standardized command, or only lowercased and
// stripped of punctuation. Throws kEmptyCommand.
std::string PrepareCommand(std::string_view raw, bool standardize);

// Encoder config with the vocabulary size filled in and the net's
// conditioning width matched to the encoder.
ModelConfig ResolveConfig(ModelConfig config, const text::Vocabulary& vocab);

}  // namespace dlm

#endif  // DLM_POLICY_H_
