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

#ifndef DLM_NOISE_NET_H_
#define DLM_NOISE_NET_H_

#include <random>
#include <span>
#include <string>
#include <vector>

#include "dlm/error.h"
#include "dlm/nn.h"

namespace dlm::diffusion {

// Per-pose feature count in the normalized trajectory: x, y, cos, sin.
inline constexpr int kPoseFeatures = 4;

struct NoiseNetConfig {
  int horizon = 22;
  int width = 128;
  int blocks = 3;
  int heads = 4;
  int ff_mult = 4;
  int cond_dim = 64;

  bool operator==(const NoiseNetConfig&) const = default;
};

// Transformer noise predictor. Each pose is one token; the projected
// conditioning vector and the step embedding are added to every token.
template <typename T>
class NoiseNet {
 public:
  using Matrix = nn::Matrix<T>;

  struct Cache {
    Matrix tokens;      // (B*H) x 4
    Matrix step_sin;    // B x width
    Matrix step_pre;    // B x width, before SiLU
    Matrix step_act;    // B x width
    Matrix cond;        // B x cond_dim
    std::vector<nn::Segment> segments;
    std::vector<typename nn::Block<T>::Cache> blocks;
    typename nn::LayerNorm<T>::Cache out_ln;
    Matrix head_in;     // (B*H) x width
  };

  NoiseNet() = default;
  NoiseNet(const NoiseNetConfig& config, std::mt19937_64& rng)
      : config_(config),
        in_proj_(kPoseFeatures, config.width),
        position_(Matrix::Zero(config.horizon, config.width)),
        step1_(config.width, config.width),
        step2_(config.width, config.width),
        cond_proj_(config.cond_dim, config.width),
        out_ln_(config.width),
        out_proj_(config.width, kPoseFeatures) {
    if (config.width % config.heads != 0) {
      Fail(ErrorCode::kInvalidArgument, "width must divide into heads");
    }
    in_proj_.Init(rng);
    nn::FillNormal(position_, 0.1, rng);
    step1_.Init(rng);
    step2_.Init(rng);
    cond_proj_.Init(rng);
    for (int i = 0; i < config.blocks; ++i) {
      blocks_.emplace_back(config.width, config.heads, config.ff_mult);
      blocks_.back().Init(rng);
    }
    out_proj_.Init(rng, 0.1);
  }

  const NoiseNetConfig& config() const { return config_; }
  int output_size() const { return kPoseFeatures * config_.horizon; }

  // tau: B x 4H, steps: B values in [1, K], cond: B x cond_dim.
  Matrix Forward(const Matrix& tau, std::span<const int> steps,
                 const Matrix& cond, Cache* cache) const {
    const int batch = static_cast<int>(tau.rows());
    const int horizon = config_.horizon;
    if (tau.cols() != output_size() ||
        static_cast<int>(steps.size()) != batch || cond.rows() != batch ||
        cond.cols() != config_.cond_dim) {
      Fail(ErrorCode::kInvalidArgument,
           "noise net input shape mismatch: tau " + Shape(tau) + ", cond " +
               Shape(cond) + ", steps " + std::to_string(steps.size()));
    }
    Cache local;
    Cache& c = cache != nullptr ? *cache : local;
    c.tokens = Eigen::Map<const Matrix>(tau.data(), batch * horizon,
                                        kPoseFeatures);
    c.step_sin = nn::SinusoidalEmbedding<T>(
        std::vector<int>(steps.begin(), steps.end()), config_.width);
    c.step_pre = step1_.Forward(c.step_sin);
    c.step_act = nn::Silu(c.step_pre);
    c.cond = cond;
    const Matrix shift = step2_.Forward(c.step_act) + cond_proj_.Forward(cond);

    Matrix h = in_proj_.Forward(c.tokens);
    c.segments.resize(batch);
    for (int b = 0; b < batch; ++b) {
      c.segments[b] = {b * horizon, horizon};
      auto rows = h.middleRows(b * horizon, horizon);
      rows += position_;
      rows.rowwise() += shift.row(b);
    }
    c.blocks.resize(blocks_.size());
    for (size_t i = 0; i < blocks_.size(); ++i) {
      h = blocks_[i].Forward(h, c.segments, c.blocks[i]);
    }
    c.head_in = out_ln_.Forward(h, c.out_ln);
    const Matrix y = out_proj_.Forward(c.head_in);
    return Eigen::Map<const Matrix>(y.data(), batch, output_size());
  }

  // Accumulates parameter gradients; returns the gradient on `cond`.
  Matrix Backward(const Matrix& d_out, const Cache& cache,
                  NoiseNet& grad) const {
    const int batch = static_cast<int>(d_out.rows());
    const int horizon = config_.horizon;
    const Matrix dy = Eigen::Map<const Matrix>(d_out.data(), batch * horizon,
                                               kPoseFeatures);
    Matrix dh = out_proj_.Backward(cache.head_in, dy, grad.out_proj_);
    dh = out_ln_.Backward(dh, cache.out_ln, grad.out_ln_);
    for (size_t i = blocks_.size(); i-- > 0;) {
      dh = blocks_[i].Backward(dh, cache.segments, cache.blocks[i],
                               grad.blocks_[i]);
    }
    Matrix d_shift(batch, config_.width);
    for (int b = 0; b < batch; ++b) {
      const auto rows = dh.middleRows(b * horizon, horizon);
      grad.position_ += rows;
      d_shift.row(b) = rows.colwise().sum();
    }
    in_proj_.Backward(cache.tokens, dh, grad.in_proj_);
    const Matrix d_act = step2_.Backward(cache.step_act, d_shift, grad.step2_);
    step1_.Backward(cache.step_sin, nn::SiluGrad(cache.step_pre, d_act),
                    grad.step1_);
    return cond_proj_.Backward(cache.cond, d_shift, grad.cond_proj_);
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    in_proj_.Visit(prefix + ".in_proj", fn);
    fn(prefix + ".position", position_);
    step1_.Visit(prefix + ".step1", fn);
    step2_.Visit(prefix + ".step2", fn);
    cond_proj_.Visit(prefix + ".cond_proj", fn);
    for (size_t i = 0; i < blocks_.size(); ++i) {
      blocks_[i].Visit(prefix + ".block" + std::to_string(i), fn);
    }
    out_ln_.Visit(prefix + ".out_ln", fn);
    out_proj_.Visit(prefix + ".out_proj", fn);
  }

 private:
  static std::string Shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

  NoiseNetConfig config_;
  nn::Linear<T> in_proj_;
  Matrix position_;
  nn::Linear<T> step1_;
  nn::Linear<T> step2_;
  nn::Linear<T> cond_proj_;
  std::vector<nn::Block<T>> blocks_;
  nn::LayerNorm<T> out_ln_;
  nn::Linear<T> out_proj_;
};

}  // namespace dlm::diffusion

#endif  // DLM_NOISE_NET_H_
