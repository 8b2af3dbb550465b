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

#ifndef DLM_NN_H_
#define DLM_NN_H_

// Minimal transformer building blocks with hand-written backward passes.
//
// Activations are row-major matrices with one row per token. Several
// sequences are stacked vertically and described by `Segment`s; attention
// never crosses a segment boundary. Every layer exposes
//
//   Forward(input, ..., cache)            -> output
//   Backward(d_output, cache, grad_layer) -> d_input
//
// where `grad_layer` has the same shapes as the layer and accumulates
// parameter gradients. `Visit(prefix, fn)` enumerates parameters in a fixed
// order; checkpoints and the optimizer rely on that order.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace dlm::nn {

template <typename T>
using Matrix =
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Column = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct Segment {
  int start = 0;
  int length = 0;
};

template <typename T>
void FillNormal(Matrix<T>& m, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<T>(dist(rng));
  }
}

// Copy of `layer` with every parameter zeroed; used as a gradient buffer.
template <typename Layer>
Layer ZerosLike(const Layer& layer) {
  Layer zero = layer;
  zero.Visit("", [](const std::string&, auto& m) { m.setZero(); });
  return zero;
}

// tanh approximation of GELU.
template <typename T>
Matrix<T> Gelu(const Matrix<T>& x) {
  constexpr T kC = static_cast<T>(0.7978845608028654);  // sqrt(2/pi)
  constexpr T kA = static_cast<T>(0.044715);
  const auto v = x.array();
  const auto t = (kC * (v + kA * v.cube())).tanh();
  return (static_cast<T>(0.5) * v * (static_cast<T>(1) + t)).matrix();
}

template <typename T>
Matrix<T> GeluGrad(const Matrix<T>& x, const Matrix<T>& dy) {
  constexpr T kC = static_cast<T>(0.7978845608028654);
  constexpr T kA = static_cast<T>(0.044715);
  const auto v = x.array();
  const auto t = (kC * (v + kA * v.cube())).tanh().eval();
  const auto du = kC * (static_cast<T>(1) + (3 * kA) * v.square());
  const auto g = static_cast<T>(0.5) * (static_cast<T>(1) + t) +
                 static_cast<T>(0.5) * v * (static_cast<T>(1) - t.square()) * du;
  return (g * dy.array()).matrix();
}

template <typename T>
Matrix<T> Silu(const Matrix<T>& x) {
  return x.unaryExpr([](T v) {
    return v / (static_cast<T>(1) + std::exp(-v));
  });
}

template <typename T>
Matrix<T> SiluGrad(const Matrix<T>& x, const Matrix<T>& dy) {
  Matrix<T> dx(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const T v = x.data()[i];
    const T s = static_cast<T>(1) / (static_cast<T>(1) + std::exp(-v));
    dx.data()[i] = dy.data()[i] * s * (static_cast<T>(1) + v * (1 - s));
  }
  return dx;
}

// y = x W + b with W stored in x out.
template <typename T>
struct Linear {
  Matrix<T> weight;
  Matrix<T> bias;

  Linear() = default;
  Linear(int in, int out)
      : weight(Matrix<T>::Zero(in, out)), bias(Matrix<T>::Zero(1, out)) {}

  void Init(std::mt19937_64& rng, double gain = 1.0) {
    FillNormal(weight, gain / std::sqrt(static_cast<double>(weight.rows())),
               rng);
    bias.setZero();
  }

  Matrix<T> Forward(const Matrix<T>& x) const {
    Matrix<T> y = x * weight;
    y.rowwise() += bias.row(0);
    return y;
  }

  Matrix<T> Backward(const Matrix<T>& x, const Matrix<T>& dy,
                     Linear& grad) const {
    grad.weight.noalias() += x.transpose() * dy;
    grad.bias.row(0) += dy.colwise().sum();
    return dy * weight.transpose();
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    fn(prefix + ".weight", weight);
    fn(prefix + ".bias", bias);
  }
};

template <typename T>
struct LayerNorm {
  static constexpr double kEps = 1e-5;

  Matrix<T> gamma;
  Matrix<T> beta;

  struct Cache {
    Matrix<T> xhat;
    Column<T> inv_std;
  };

  LayerNorm() = default;
  explicit LayerNorm(int dim)
      : gamma(Matrix<T>::Ones(1, dim)), beta(Matrix<T>::Zero(1, dim)) {}

  Matrix<T> Forward(const Matrix<T>& x, Cache& cache) const {
    const Column<T> mean = x.rowwise().mean();
    Matrix<T> centered = x.colwise() - mean;
    const Column<T> var = centered.array().square().rowwise().mean();
    cache.inv_std =
        (var.array() + static_cast<T>(kEps)).rsqrt().matrix();
    cache.xhat = centered.array().colwise() * cache.inv_std.array();
    Matrix<T> y = cache.xhat.array().rowwise() * gamma.row(0).array();
    y.rowwise() += beta.row(0);
    return y;
  }

  Matrix<T> Backward(const Matrix<T>& dy, const Cache& cache,
                     LayerNorm& grad) const {
    grad.gamma.row(0) +=
        (dy.array() * cache.xhat.array()).colwise().sum().matrix();
    grad.beta.row(0) += dy.colwise().sum();
    const Matrix<T> dxhat = dy.array().rowwise() * gamma.row(0).array();
    const Column<T> mean_d = dxhat.rowwise().mean();
    const Column<T> mean_dx =
        (dxhat.array() * cache.xhat.array()).rowwise().mean();
    Matrix<T> dx = dxhat.colwise() - mean_d;
    dx.array() -= cache.xhat.array().colwise() * mean_dx.array();
    dx.array().colwise() *= cache.inv_std.array();
    return dx;
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    fn(prefix + ".gamma", gamma);
    fn(prefix + ".beta", beta);
  }
};

// Unmasked multi-head self-attention within each segment.
template <typename T>
struct SelfAttention {
  int heads = 1;
  Linear<T> qkv;  // width x 3*width, [Q | K | V]
  Linear<T> out;

  struct Cache {
    Matrix<T> x;
    Matrix<T> qkv;
    std::vector<Matrix<T>> probs;  // per (segment, head)
    Matrix<T> context;
  };

  SelfAttention() = default;
  SelfAttention(int width, int num_heads)
      : heads(num_heads), qkv(width, 3 * width), out(width, width) {}

  void Init(std::mt19937_64& rng) {
    qkv.Init(rng);
    out.Init(rng);
  }

  int width() const { return static_cast<int>(out.weight.rows()); }

  Matrix<T> Forward(const Matrix<T>& x, const std::vector<Segment>& segments,
                    Cache& cache) const {
    const int w = width();
    const int dh = w / heads;
    const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
    cache.x = x;
    cache.qkv = qkv.Forward(x);
    cache.context = Matrix<T>::Zero(x.rows(), w);
    cache.probs.assign(segments.size() * heads, Matrix<T>());
    for (size_t s = 0; s < segments.size(); ++s) {
      const auto [start, len] = segments[s];
      for (int h = 0; h < heads; ++h) {
        const auto q = cache.qkv.block(start, h * dh, len, dh);
        const auto k = cache.qkv.block(start, w + h * dh, len, dh);
        const auto v = cache.qkv.block(start, 2 * w + h * dh, len, dh);
        Matrix<T> p = (q * k.transpose()) * scale;
        for (int r = 0; r < len; ++r) {
          auto row = p.row(r);
          row.array() -= row.maxCoeff();
          row = row.array().exp().matrix();
          row /= row.sum();
        }
        cache.context.block(start, h * dh, len, dh).noalias() = p * v;
        cache.probs[s * heads + h] = std::move(p);
      }
    }
    return out.Forward(cache.context);
  }

  Matrix<T> Backward(const Matrix<T>& dy, const std::vector<Segment>& segments,
                     const Cache& cache, SelfAttention& grad) const {
    const int w = width();
    const int dh = w / heads;
    const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
    const Matrix<T> dctx = out.Backward(cache.context, dy, grad.out);
    Matrix<T> dqkv = Matrix<T>::Zero(cache.qkv.rows(), cache.qkv.cols());
    for (size_t s = 0; s < segments.size(); ++s) {
      const auto [start, len] = segments[s];
      for (int h = 0; h < heads; ++h) {
        const Matrix<T>& p = cache.probs[s * heads + h];
        const auto q = cache.qkv.block(start, h * dh, len, dh);
        const auto k = cache.qkv.block(start, w + h * dh, len, dh);
        const auto v = cache.qkv.block(start, 2 * w + h * dh, len, dh);
        const auto dc = dctx.block(start, h * dh, len, dh);
        const Matrix<T> dp = dc * v.transpose();
        dqkv.block(start, 2 * w + h * dh, len, dh).noalias() =
            p.transpose() * dc;
        const Column<T> dot = (dp.array() * p.array()).rowwise().sum();
        Matrix<T> ds = p.array() * (dp.colwise() - dot).array();
        ds *= scale;
        dqkv.block(start, h * dh, len, dh).noalias() = ds * k;
        dqkv.block(start, w + h * dh, len, dh).noalias() = ds.transpose() * q;
      }
    }
    return qkv.Backward(cache.x, dqkv, grad.qkv);
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    qkv.Visit(prefix + ".qkv", fn);
    out.Visit(prefix + ".out", fn);
  }
};

// Pre-norm transformer block: x + Attn(LN(x)), then + FFN(LN(.)).
template <typename T>
struct Block {
  LayerNorm<T> ln1;
  SelfAttention<T> attn;
  LayerNorm<T> ln2;
  Linear<T> ff1;
  Linear<T> ff2;

  struct Cache {
    typename LayerNorm<T>::Cache ln1;
    typename SelfAttention<T>::Cache attn;
    typename LayerNorm<T>::Cache ln2;
    Matrix<T> ff_in;
    Matrix<T> ff_pre;
    Matrix<T> ff_act;
  };

  Block() = default;
  Block(int width, int heads, int ff_mult)
      : ln1(width),
        attn(width, heads),
        ln2(width),
        ff1(width, ff_mult * width),
        ff2(ff_mult * width, width) {}

  void Init(std::mt19937_64& rng) {
    attn.Init(rng);
    ff1.Init(rng);
    ff2.Init(rng);
  }

  Matrix<T> Forward(const Matrix<T>& x, const std::vector<Segment>& segments,
                    Cache& cache) const {
    Matrix<T> x1 =
        x + attn.Forward(ln1.Forward(x, cache.ln1), segments, cache.attn);
    cache.ff_in = ln2.Forward(x1, cache.ln2);
    cache.ff_pre = ff1.Forward(cache.ff_in);
    cache.ff_act = Gelu(cache.ff_pre);
    x1 += ff2.Forward(cache.ff_act);
    return x1;
  }

  Matrix<T> Backward(const Matrix<T>& dy, const std::vector<Segment>& segments,
                     const Cache& cache, Block& grad) const {
    const Matrix<T> dact = ff2.Backward(cache.ff_act, dy, grad.ff2);
    const Matrix<T> dpre = GeluGrad(cache.ff_pre, dact);
    const Matrix<T> dffin = ff1.Backward(cache.ff_in, dpre, grad.ff1);
    Matrix<T> dx1 = dy + ln2.Backward(dffin, cache.ln2, grad.ln2);
    const Matrix<T> da = attn.Backward(dx1, segments, cache.attn, grad.attn);
    dx1 += ln1.Backward(da, cache.ln1, grad.ln1);
    return dx1;
  }

  template <typename F>
  void Visit(const std::string& prefix, F&& fn) {
    ln1.Visit(prefix + ".ln1", fn);
    attn.Visit(prefix + ".attn", fn);
    ln2.Visit(prefix + ".ln2", fn);
    ff1.Visit(prefix + ".ff1", fn);
    ff2.Visit(prefix + ".ff2", fn);
  }
};

// Sinusoidal embedding of integer steps, one row per step.
template <typename T>
Matrix<T> SinusoidalEmbedding(const std::vector<int>& steps, int dim) {
  Matrix<T> out(static_cast<Eigen::Index>(steps.size()), dim);
  const int half = dim / 2;
  for (size_t r = 0; r < steps.size(); ++r) {
    for (int i = 0; i < half; ++i) {
      const double freq = std::exp(-std::log(10000.0) * i / half);
      out(r, i) = static_cast<T>(std::sin(steps[r] * freq));
      out(r, half + i) = static_cast<T>(std::cos(steps[r] * freq));
    }
    if (dim % 2 == 1) out(r, dim - 1) = static_cast<T>(0);
  }
  return out;
}

}  // namespace dlm::nn

#endif  // DLM_NN_H_
