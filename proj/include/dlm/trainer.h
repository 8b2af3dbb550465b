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

#ifndef DLM_TRAINER_H_
#define DLM_TRAINER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "dlm/dataset.h"
#include "dlm/policy.h"

namespace dlm {

struct TrainConfig {
  int epochs = 30;
  int batch_size = 64;
  double lr_start = 1e-4;
  double lr_peak = 2e-3;
  double warmup_fraction = 0.1;  // of all steps, linear ramp to lr_peak
  double weight_decay = 1.25e-6;
  double grad_clip = 1.0;        // global norm; <= 0 disables
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;             // batching, steps and noise draws
  int max_steps = 0;             // > 0 stops early
  int validation_samples = 32;   // reconstructed per epoch; 0 disables
};

struct EpochStats {
  int epoch = 0;  // 1-based
  int steps = 0;  // cumulative optimizer steps
  double loss = 0.0;
  double lr = 0.0;
  double val_rmse_cm = 0.0;
  double val_maoe_deg = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::vector<double> step_losses;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Vocabulary built from the prepared training commands.
text::Vocabulary BuildVocabulary(const io::Dataset& data,
                                 const ModelConfig& config);

// Trains encoder and noise predictor jointly on noise-prediction MSE with
// Adam. An epoch is one shuffled pass in batches of batch_size; datasets
// smaller than a batch are repeated to fill it. Throws kNumeric on a
// non-finite loss and kInvalidArgument on an empty dataset.
Policy Train(const io::Dataset& data, const ModelConfig& model,
             const TrainConfig& train, TrainHistory* history = nullptr,
             const EpochCallback& on_epoch = {});

// Learning rate at 0-based optimizer step `step` of `total`.
double LearningRate(const TrainConfig& train, int step, int total);

}  // namespace dlm

#endif  // DLM_TRAINER_H_
