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

#include "dlm/trainer.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "dlm/error.h"
#include "dlm/metrics.h"

namespace dlm {

namespace {

using Mat = nn::Matrix<Real>;

struct NamedTensor {
  std::string name;
  Mat* value;
};

template <typename Owner>
void Collect(Owner& owner, const std::string& prefix,
             std::vector<NamedTensor>& out) {
  owner.Visit(prefix, [&](const std::string& name, Mat& m) {
    out.push_back({name, &m});
  });
}

class Adam {
 public:
  Adam(const std::vector<NamedTensor>& params, const TrainConfig& config)
      : config_(config) {
    for (const auto& p : params) {
      m_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
      v_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
    }
  }

  void Step(const std::vector<NamedTensor>& params,
            const std::vector<NamedTensor>& grads, double lr, double scale) {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, t_);
    const double c2 = 1.0 - std::pow(config_.beta2, t_);
    const auto b1 = static_cast<Real>(config_.beta1);
    const auto b2 = static_cast<Real>(config_.beta2);
    const auto wd = static_cast<Real>(config_.weight_decay);
    const auto step = static_cast<Real>(lr / c1);
    const auto inv_c2 = static_cast<Real>(1.0 / c2);
    const auto eps = static_cast<Real>(config_.adam_eps);
    const auto s = static_cast<Real>(scale);
    for (size_t i = 0; i < params.size(); ++i) {
      auto p = params[i].value->array();
      const auto g = (grads[i].value->array() * s + wd * p).eval();
      auto m = m_[i].array();
      auto v = v_[i].array();
      m = b1 * m + (1 - b1) * g;
      v = b2 * v + (1 - b2) * g.square();
      p -= step * m / ((v * inv_c2).sqrt() + eps);
    }
  }

 private:
  TrainConfig config_;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
  int t_ = 0;
};

double GlobalNorm(const std::vector<NamedTensor>& grads) {
  double total = 0.0;
  for (const auto& g : grads) total += g.value->cast<double>().squaredNorm();
  return std::sqrt(total);
}

[[noreturn]] void AbortNonFinite(int step, double loss, double lr,
                                 const std::vector<NamedTensor>& grads) {
  std::vector<std::pair<double, std::string>> norms;
  for (const auto& g : grads) {
    norms.emplace_back(g.value->cast<double>().norm(), g.name);
  }
  // NaN first, then descending. NaN never compares, so test it explicitly.
  std::stable_sort(norms.begin(), norms.end(),
                   [](const auto& a, const auto& b) {
                     const bool a_nan = std::isnan(a.first);
                     const bool b_nan = std::isnan(b.first);
                     if (a_nan != b_nan) return a_nan;
                     return !a_nan && a.first > b.first;
                   });
  std::ostringstream msg;
  msg << "non-finite training loss " << loss << " at step " << step
      << " (lr " << lr << "); largest gradient norms:";
  for (size_t i = 0; i < std::min<size_t>(5, norms.size()); ++i) {
    msg << " " << norms[i].second << "=" << norms[i].first;
  }
  Fail(ErrorCode::kNumeric, msg.str());
}

}  // namespace

text::Vocabulary BuildVocabulary(const io::Dataset& data,
                                 const ModelConfig& config) {
  std::vector<std::string> corpus;
  corpus.reserve(data.size());
  for (const auto& s : data.samples) {
    corpus.push_back(PrepareCommand(s.command, config.standardize));
  }
  return text::Vocabulary::Build(corpus);
}

double LearningRate(const TrainConfig& train, int step, int total) {
  const int warmup = std::max(
      1, static_cast<int>(std::lround(train.warmup_fraction * total)));
  if (step >= warmup) return train.lr_peak;
  return train.lr_start +
         (train.lr_peak - train.lr_start) * step / static_cast<double>(warmup);
}

Policy Train(const io::Dataset& data, const ModelConfig& model,
             const TrainConfig& train, TrainHistory* history,
             const EpochCallback& on_epoch) {
  if (data.empty()) Fail(ErrorCode::kInvalidArgument, "training set is empty");
  if (train.batch_size < 1 || train.epochs < 1) {
    Fail(ErrorCode::kInvalidArgument, "batch size and epochs must be >= 1");
  }
  Policy policy(model, BuildVocabulary(data, model));
  const auto& schedule = policy.schedule();
  const int n = static_cast<int>(data.size());
  const int dim = policy.net().output_size();

  std::vector<std::vector<int>> tokens(n);
  Mat tau0(n, dim);
  for (int i = 0; i < n; ++i) {
    tokens[i] = policy.Tokens(data.samples[i].command);
    const Trajectory padded = data.samples[i].trajectory.Padded(kHorizon);
    tau0.row(i) = diffusion::Normalize(padded, policy.config().stats)
                      .cast<Real>()
                      .transpose();
  }

  std::vector<NamedTensor> params;
  Collect(policy.encoder(), "encoder", params);
  Collect(policy.net(), "net", params);
  text::Encoder<Real> enc_grad = nn::ZerosLike(policy.encoder());
  diffusion::NoiseNet<Real> net_grad = nn::ZerosLike(policy.net());
  std::vector<NamedTensor> grads;
  Collect(enc_grad, "encoder", grads);
  Collect(net_grad, "net", grads);
  Adam adam(params, train);

  const int batch = train.batch_size;
  const int steps_per_epoch = std::max(1, (n + batch - 1) / batch);
  int total = train.epochs * steps_per_epoch;
  if (train.max_steps > 0) total = std::min(total, train.max_steps);

  // Validation subset, fixed for the run.
  std::vector<int> val_index;
  if (train.validation_samples > 0) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 val_rng(train.seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(all.begin(), all.end(), val_rng);
    all.resize(std::min(n, train.validation_samples));
    val_index = std::move(all);
  }

  std::mt19937_64 rng(train.seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick_step(1, schedule.steps);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainHistory local;
  TrainHistory& hist = history != nullptr ? *history : local;
  int step = 0;
  for (int epoch = 1; epoch <= train.epochs && step < total; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int loss_count = 0;
    double lr = 0.0;
    for (int j = 0; j < steps_per_epoch && step < total; ++j, ++step) {
      const int begin = j * batch;
      const int rows = n >= batch ? std::min(batch, n - begin) : batch;
      std::vector<std::vector<int>> batch_tokens(rows);
      std::vector<int> ks(rows);
      Mat tau_k(rows, dim);
      Mat eps(rows, dim);
      for (int r = 0; r < rows; ++r) {
        const int idx = order[(begin + r) % n];
        batch_tokens[r] = tokens[idx];
        ks[r] = pick_step(rng);
        const double abar = schedule.alpha_bar[ks[r] - 1];
        const auto a = static_cast<Real>(std::sqrt(abar));
        const auto b = static_cast<Real>(std::sqrt(1.0 - abar));
        for (int c = 0; c < dim; ++c) {
          eps(r, c) = static_cast<Real>(normal(rng));
        }
        tau_k.row(r) = a * tau0.row(idx) + b * eps.row(r);
      }

      typename text::Encoder<Real>::Cache enc_cache;
      typename diffusion::NoiseNet<Real>::Cache net_cache;
      const Mat pooled =
          policy.encoder().Forward(batch_tokens, &enc_cache).pooled;
      const Mat eps_hat = policy.net().Forward(tau_k, ks, pooled, &net_cache);
      const Mat diff = eps_hat - eps;
      const double loss = diff.cast<double>().squaredNorm() /
                          (static_cast<double>(rows) * dim);

      for (auto& g : grads) g.value->setZero();
      const Mat d_out = diff * static_cast<Real>(2.0 / (rows * dim));
      const Mat d_cond = policy.net().Backward(d_out, net_cache, net_grad);
      policy.encoder().Backward(d_cond, enc_cache, enc_grad);

      lr = LearningRate(train, step, total);
      const double norm = GlobalNorm(grads);
      if (!std::isfinite(loss) || !std::isfinite(norm)) {
        AbortNonFinite(step, loss, lr, grads);
      }
      const double scale = train.grad_clip > 0.0 && norm > train.grad_clip
                               ? train.grad_clip / norm
                               : 1.0;
      adam.Step(params, grads, lr, scale);
      hist.step_losses.push_back(loss);
      loss_sum += loss;
      ++loss_count;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.steps = step;
    stats.loss = loss_sum / std::max(1, loss_count);
    stats.lr = lr;
    if (!val_index.empty()) {
      std::vector<std::string> commands;
      std::vector<uint64_t> seeds;
      for (int idx : val_index) {
        commands.push_back(data.samples[idx].command);
        seeds.push_back(train.seed + static_cast<uint64_t>(idx));
      }
      const auto generated = policy.SampleBatch(commands, seeds);
      std::vector<metrics::EvalResult> results;
      for (size_t i = 0; i < generated.size(); ++i) {
        results.push_back(metrics::Evaluate(
            generated[i].trajectory, data.samples[val_index[i]].trajectory));
      }
      const auto summary = metrics::Aggregate(results);
      stats.val_rmse_cm = summary.rmse_cm.mean;
      stats.val_maoe_deg = summary.maoe_deg.mean;
    }
    stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    hist.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return policy;
}

}  // namespace dlm
