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

#ifndef DLM_TESTS_ORACLES_H_
#define DLM_TESTS_ORACLES_H_

// Slow reference implementations written independently of the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dlm/encoder.h"
#include "dlm/geometry.h"
#include "dlm/metrics.h"
#include "dlm/noise_net.h"

namespace dlm::oracle {

using Xyt = std::array<double, 3>;

inline std::vector<Xyt> Raw(const Trajectory& t) {
  std::vector<Xyt> out;
  for (int i = 0; i < t.active_len(); ++i) {
    out.push_back({t[i].x(), t[i].y(), t[i].theta()});
  }
  return out;
}

inline double Wrap(double a) {
  const double two_pi = 2 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a > std::numbers::pi) a -= two_pi;
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

// Walks the polyline once per target station.
inline std::vector<Xyt> ResampleSlow(const std::vector<Xyt>& p, int n) {
  std::vector<double> cum(p.size(), 0.0);
  for (size_t i = 1; i < p.size(); ++i) {
    cum[i] = cum[i - 1] + std::hypot(p[i][0] - p[i - 1][0],
                                     p[i][1] - p[i - 1][1]);
  }
  const double total = cum.back();
  std::vector<Xyt> out;
  for (int j = 0; j < n; ++j) {
    if (j == n - 1) {
      out.push_back(p.back());
      continue;
    }
    if (total == 0.0) {
      out.push_back(p.front());
      continue;
    }
    const double s = total * j / (n - 1);
    size_t seg = 0;
    while (seg + 2 < p.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double u = len > 0 ? (s - cum[seg]) / len : 0.0;
    const Xyt& a = p[seg];
    const Xyt& b = p[seg + 1];
    out.push_back({a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]),
                   Wrap(a[2] + u * Wrap(b[2] - a[2]))});
  }
  return out;
}

inline metrics::EvalResult Evaluate(const Trajectory& gen,
                                    const Trajectory& ref, double threshold) {
  const auto g = ResampleSlow(Raw(gen), metrics::kComparePoints);
  const auto r = ResampleSlow(Raw(ref), metrics::kComparePoints);
  double sq = 0.0, ang = 0.0;
  for (int i = 0; i < metrics::kComparePoints; ++i) {
    const double dx = g[i][0] - r[i][0];
    const double dy = g[i][1] - r[i][1];
    sq += dx * dx + dy * dy;
    ang += std::abs(Wrap(g[i][2] - r[i][2]));
  }
  metrics::EvalResult out;
  out.rmse_cm = 100.0 * std::sqrt(sq / metrics::kComparePoints);
  out.maoe_deg = ang / metrics::kComparePoints * 180.0 / std::numbers::pi;
  const Xyt ge = Raw(gen).back();
  const Xyt re = Raw(ref).back();
  out.endpoint_error_m = std::hypot(ge[0] - re[0], ge[1] - re[1]);
  out.success = out.endpoint_error_m < threshold;
  return out;
}

// Two-pass mean and sample std.
inline metrics::MeanStd MeanStd(const std::vector<double>& v) {
  metrics::MeanStd out;
  for (double x : v) out.mean += x;
  out.mean /= v.size();
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / (v.size() - 1));
  }
  return out;
}

inline Trajectory RandomPair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(2, 22);
  std::normal_distribution<double> normal;
  std::vector<Pose2> poses;
  double x = 0, y = 0, th = 0;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    poses.emplace_back(x, y, th);
    x += 0.3 * normal(rng);
    y += 0.3 * normal(rng);
    th += 0.5 * normal(rng);
  }
  return Trajectory(std::move(poses));
}

// Largest relative error between backprop and central differences.
struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst;
  int checked = 0;
};

inline double RelError(double a, double b) {
  const double scale = std::max(std::abs(a) + std::abs(b), 1e-6);
  return std::abs(a - b) / scale;
}

template <typename Model, typename LossFn, typename GradFn>
GradCheck CheckParameters(Model& model, LossFn loss, GradFn backprop,
                          std::mt19937_64& rng, int per_tensor = 12,
                          double h = 1e-5) {
  Model grad = model;
  grad.Visit("g", [](const std::string&, auto& m) { m.setZero(); });
  backprop(grad);
  std::vector<std::pair<std::string, nn::Matrix<double>*>> params, grads;
  model.Visit("p", [&](const std::string& name, nn::Matrix<double>& m) {
    params.emplace_back(name, &m);
  });
  grad.Visit("g", [&](const std::string& name, nn::Matrix<double>& m) {
    grads.emplace_back(name, &m);
  });
  GradCheck out;
  for (size_t t = 0; t < params.size(); ++t) {
    nn::Matrix<double>& p = *params[t].second;
    std::uniform_int_distribution<Eigen::Index> pick(0, p.size() - 1);
    for (int s = 0; s < per_tensor; ++s) {
      const Eigen::Index i = pick(rng);
      const double saved = p.data()[i];
      p.data()[i] = saved + h;
      const double up = loss();
      p.data()[i] = saved - h;
      const double down = loss();
      p.data()[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads[t].second->data()[i];
      // Entries with no influence on the loss (unused embedding rows).
      if (std::abs(numeric) < 1e-9 && std::abs(analytic) < 1e-9) continue;
      ++out.checked;
      const double err = RelError(analytic, numeric);
      if (err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst = params[t].first;
      }
    }
  }
  return out;
}

inline GradCheck CheckEncoder(text::EncoderKind kind, uint64_t seed) {
  std::mt19937_64 rng(seed);
  text::EncoderConfig cfg;
  cfg.vocab_size = 12;
  cfg.dim = 16;
  cfg.heads = 4;
  cfg.layers = 2;
  cfg.max_len = 8;
  cfg.kind = kind;
  text::Encoder<double> enc(cfg, rng);
  const std::vector<std::vector<int>> batch = {{2, 5, 7, 3}, {4, 9}, {11}};
  nn::Matrix<double> weights(3, cfg.dim);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    weights.data()[i] = normal(rng);
  }
  auto loss = [&] {
    return enc.Forward(batch, nullptr).pooled.cwiseProduct(weights).sum();
  };
  auto backprop = [&](text::Encoder<double>& grad) {
    typename text::Encoder<double>::Cache cache;
    enc.Forward(batch, &cache);
    enc.Backward(weights, cache, grad);
  };
  return CheckParameters(enc, loss, backprop, rng);
}

inline GradCheck CheckNoiseNet(uint64_t seed) {
  std::mt19937_64 rng(seed);
  diffusion::NoiseNetConfig cfg;
  cfg.horizon = 6;
  cfg.width = 16;
  cfg.blocks = 2;
  cfg.heads = 4;
  cfg.cond_dim = 8;
  diffusion::NoiseNet<double> net(cfg, rng);
  std::normal_distribution<double> normal;
  const int batch = 2;
  nn::Matrix<double> tau(batch, net.output_size());
  nn::Matrix<double> cond(batch, cfg.cond_dim);
  nn::Matrix<double> weights(batch, net.output_size());
  for (auto* m : {&tau, &cond, &weights}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = normal(rng);
  }
  const std::vector<int> steps = {3, 41};
  auto loss = [&] {
    return net.Forward(tau, steps, cond, nullptr).cwiseProduct(weights).sum();
  };
  nn::Matrix<double> d_cond;
  auto backprop = [&](diffusion::NoiseNet<double>& grad) {
    typename diffusion::NoiseNet<double>::Cache cache;
    net.Forward(tau, steps, cond, &cache);
    d_cond = net.Backward(weights, cache, grad);
  };
  GradCheck out = CheckParameters(net, loss, backprop, rng);
  // The conditioning input gradient feeds the encoder during training.
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < cond.size(); ++i) {
    const double saved = cond.data()[i];
    cond.data()[i] = saved + h;
    const double up = loss();
    cond.data()[i] = saved - h;
    const double down = loss();
    cond.data()[i] = saved;
    const double err = RelError(d_cond.data()[i], (up - down) / (2 * h));
    ++out.checked;
    if (err > out.max_rel_error) {
      out.max_rel_error = err;
      out.worst = "cond";
    }
  }
  return out;
}

}  // namespace dlm::oracle

#endif  // DLM_TESTS_ORACLES_H_
