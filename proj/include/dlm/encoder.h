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

#ifndef DLM_ENCODER_H_
#define DLM_ENCODER_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dlm/error.h"
#include "dlm/nn.h"

namespace dlm::text {

enum class EncoderKind {
  kTransformer,  // bidirectional self-attention over the token sequence
  kBagOfWords,   // order-insensitive mean of token embeddings
};

struct EncoderConfig {
  int vocab_size = 2;
  int dim = 64;
  int layers = 2;
  int heads = 4;
  int max_len = 24;
  int ff_mult = 4;
  EncoderKind kind = EncoderKind::kTransformer;

  bool operator==(const EncoderConfig&) const = default;
};

// Trainable contextual command encoder. Produces one d-vector per token and
// their mean as the pooled sentence vector.
template <typename T>
class Encoder {
 public:
  using Matrix = nn::Matrix<T>;

  struct Cache {
    std::vector<nn::Segment> segments;
    std::vector<int> ids;  // flattened, after truncation
    std::vector<typename nn::Block<T>::Cache> blocks;
    typename nn::LayerNorm<T>::Cache final_ln;
  };

  struct Output {
    Matrix per_token;  // sum(m) x d, sequences stacked
    Matrix pooled;     // batch x d
    std::vector<nn::Segment> segments;
    bool truncated = false;  // some sequence exceeded max_len
  };

  Encoder() = default;
  Encoder(const EncoderConfig& config, std::mt19937_64& rng)
      : config_(config),
        token_embedding_(Matrix::Zero(config.vocab_size, config.dim)) {
    if (config.dim % config.heads != 0) {
      Fail(ErrorCode::kInvalidArgument, "encoder dim must divide into heads");
    }
    nn::FillNormal(token_embedding_, 1.0, rng);
    if (config.kind == EncoderKind::kTransformer) {
      position_embedding_ = Matrix::Zero(config.max_len, config.dim);
      nn::FillNormal(position_embedding_, 0.5, rng);
      for (int i = 0; i < config.layers; ++i) {
        blocks_.emplace_back(config.dim, config.heads, config.ff_mult);
        blocks_.back().Init(rng);
      }
      final_ln_ = nn::LayerNorm<T>(config.dim);
    }
  }

  const EncoderConfig& config() const { return config_; }

  // Sequences longer than max_len are truncated and flagged.
  Output Forward(const std::vector<std::vector<int>>& batch,
                 Cache* cache) const {
    Cache local;
    Cache& c = cache != nullptr ? *cache : local;
    Output out;
    c.segments.clear();
    c.ids.clear();
    for (const auto& seq : batch) {
      if (seq.empty()) Fail(ErrorCode::kEmptyCommand, "empty token sequence");
      const int len = std::min<int>(seq.size(), config_.max_len);
      out.truncated = out.truncated || len < static_cast<int>(seq.size());
      c.segments.push_back({static_cast<int>(c.ids.size()), len});
      for (int i = 0; i < len; ++i) {
        if (seq[i] < 0 || seq[i] >= config_.vocab_size) {
          Fail(ErrorCode::kInvalidArgument, "token id outside vocabulary");
        }
        c.ids.push_back(seq[i]);
      }
    }
    const int rows = static_cast<int>(c.ids.size());
    Matrix h(rows, config_.dim);
    for (int r = 0; r < rows; ++r) h.row(r) = token_embedding_.row(c.ids[r]);

    if (config_.kind == EncoderKind::kTransformer) {
      for (const auto& seg : c.segments) {
        h.middleRows(seg.start, seg.length) +=
            position_embedding_.topRows(seg.length);
      }
      c.blocks.resize(blocks_.size());
      for (size_t b = 0; b < blocks_.size(); ++b) {
        h = blocks_[b].Forward(h, c.segments, c.blocks[b]);
      }
      h = final_ln_.Forward(h, c.final_ln);
    }

    out.pooled = Matrix(static_cast<Eigen::Index>(batch.size()), config_.dim);
    for (size_t s = 0; s < c.segments.size(); ++s) {
      const auto seg = c.segments[s];
      out.pooled.row(s) = h.middleRows(seg.start, seg.length).colwise().mean();
    }
    out.per_token = std::move(h);
    out.segments = c.segments;
    return out;
  }

  // Backpropagates a gradient on the pooled vectors.
  void Backward(const Matrix& d_pooled, const Cache& cache,
                Encoder& grad) const {
    const int rows = static_cast<int>(cache.ids.size());
    Matrix dh(rows, config_.dim);
    for (size_t s = 0; s < cache.segments.size(); ++s) {
      const auto seg = cache.segments[s];
      const T inv = static_cast<T>(1.0 / seg.length);
      for (int r = 0; r < seg.length; ++r) {
        dh.row(seg.start + r) = d_pooled.row(s) * inv;
      }
    }
    if (config_.kind == EncoderKind::kTransformer) {
      dh = final_ln_.Backward(dh, cache.final_ln, grad.final_ln_);
      for (size_t b = blocks_.size(); b-- > 0;) {
        dh = blocks_[b].Backward(dh, cache.segments, cache.blocks[b],
                                 grad.blocks_[b]);
      }
      for (const auto& seg : cache.segments) {
        grad.position_embedding_.topRows(seg.length) +=
            dh.middleRows(seg.start, seg.length);
      }
    }
    for (int r = 0; r < rows; ++r) {
      grad.token_embedding_.row(cache.ids[r]) += dh.row(r);
    }
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    fn(prefix + ".token_embedding", token_embedding_);
    if (config_.kind != EncoderKind::kTransformer) return;
    fn(prefix + ".position_embedding", position_embedding_);
    for (size_t b = 0; b < blocks_.size(); ++b) {
      blocks_[b].Visit(prefix + ".block" + std::to_string(b), fn);
    }
    final_ln_.Visit(prefix + ".final_ln", fn);
  }

 private:
  EncoderConfig config_;
  Matrix token_embedding_;
  Matrix position_embedding_;
  std::vector<nn::Block<T>> blocks_;
  nn::LayerNorm<T> final_ln_;
};

}  // namespace dlm::text

#endif  // DLM_ENCODER_H_
