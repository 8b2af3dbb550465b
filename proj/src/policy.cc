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

#include <random>

#include "dlm/error.h"
#include "dlm/standardize.h"

namespace dlm {

namespace {

std::mt19937_64 InitRng(const ModelConfig& config) {
  return std::mt19937_64(config.seed);
}

}  // namespace

ModelConfig ResolveConfig(ModelConfig config, const text::Vocabulary& vocab) {
  config.encoder.vocab_size = vocab.size();
  config.net.cond_dim = config.encoder.dim;
  config.net.horizon = kHorizon;
  return config;
}

Policy::Policy(const ModelConfig& config, text::Vocabulary vocabulary)
    : config_(ResolveConfig(config, vocabulary)),
      vocabulary_(std::move(vocabulary)),
      schedule_(diffusion::MakeSchedule(config_.diffusion_steps)) {
  std::mt19937_64 rng = InitRng(config_);
  encoder_ = text::Encoder<Real>(config_.encoder, rng);
  net_ = diffusion::NoiseNet<Real>(config_.net, rng);
}

std::string PrepareCommand(std::string_view raw, bool standardize) {
  std::string prepared =
      standardize ? text::Standardize(raw) : text::BasicNormalize(raw);
  if (prepared.empty()) {
    Fail(ErrorCode::kEmptyCommand, "command is empty after normalization");
  }
  return prepared;
}

std::string Policy::Prepare(std::string_view raw) const {
  return PrepareCommand(raw, config_.standardize);
}

std::vector<int> Policy::Tokens(std::string_view raw) const {
  return vocabulary_.Tokenize(Prepare(raw));
}

nn::Matrix<Real> Policy::Embed(std::span<const std::string> commands) const {
  std::vector<std::vector<int>> batch;
  batch.reserve(commands.size());
  for (const std::string& c : commands) batch.push_back(Tokens(c));
  return encoder_.Forward(batch, nullptr).pooled;
}

nn::Matrix<Real> Policy::PredictNoise(const nn::Matrix<Real>& pooled,
                                      const nn::Matrix<Real>& tau,
                                      int k) const {
  const std::vector<int> steps(tau.rows(), k);
  return net_.Forward(tau, steps, pooled, nullptr);
}

Generation Policy::Sample(std::string_view command, uint64_t seed) const {
  const std::string text(command);
  return SampleBatch({&text, 1}, {&seed, 1}).front();
}

std::vector<Generation> Policy::SampleBatch(
    std::span<const std::string> commands,
    std::span<const uint64_t> seeds) const {
  if (commands.size() != seeds.size()) {
    Fail(ErrorCode::kInvalidArgument, "one seed per command is required");
  }
  const int batch = static_cast<int>(commands.size());
  if (batch == 0) return {};
  const nn::Matrix<Real> pooled = Embed(commands);
  const int dim = net_.output_size();

  std::vector<std::mt19937_64> rngs;
  std::vector<Eigen::VectorXd> tau(batch, Eigen::VectorXd(dim));
  std::normal_distribution<double> normal;
  for (int b = 0; b < batch; ++b) {
    rngs.emplace_back(seeds[b]);
    for (int i = 0; i < dim; ++i) tau[b][i] = normal(rngs[b]);
  }

  nn::Matrix<Real> input(batch, dim);
  for (int k = schedule_.steps; k >= 1; --k) {
    for (int b = 0; b < batch; ++b) {
      input.row(b) = tau[b].cast<Real>().transpose();
    }
    const nn::Matrix<Real> eps = PredictNoise(pooled, input, k);
    for (int b = 0; b < batch; ++b) {
      const Eigen::VectorXd eps_hat = eps.row(b).cast<double>().transpose();
      tau[b] = diffusion::DenoiseStep(tau[b], k, schedule_, eps_hat, rngs[b]);
    }
  }

  std::vector<Generation> out;
  out.reserve(batch);
  for (int b = 0; b < batch; ++b) {
    if (!tau[b].allFinite()) {
      Fail(ErrorCode::kNumeric,
           "sampling produced non-finite values for '" + commands[b] + "'");
    }
    Generation g;
    g.full = ToStartFrame(diffusion::Denormalize(tau[b], config_.stats));
    g.trajectory = config_.use_atld
                       ? atld::DetermineLength(g.full, config_.atld).trajectory
                       : g.full;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace dlm
