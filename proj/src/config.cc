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

#include "dlm/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dlm/checkpoint.h"
#include "dlm/error.h"

namespace dlm {

namespace {

namespace pt = boost::property_tree;

template <typename T>
T Convert(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) {
    Fail(ErrorCode::kSchema, "bad value '" + value + "' for " + key);
  }
  return out;
}

template <>
bool Convert<bool>(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  Fail(ErrorCode::kSchema, "bad boolean '" + value + "' for " + key);
}

using Setter = std::function<void(const std::string& key, const std::string&)>;

template <typename T>
Setter Set(T* field) {
  return [field](const std::string& key, const std::string& value) {
    *field = Convert<T>(key, value);
  };
}

std::map<std::string, Setter> Setters(RunConfig* c) {
  ModelConfig& m = c->model;
  TrainConfig& t = c->train;
  return {
      {"model.encoder",
       [&m](const std::string&, const std::string& v) {
         m.encoder.kind = ParseEncoderKind(v);
       }},
      {"model.encoder_dim", Set(&m.encoder.dim)},
      {"model.encoder_layers", Set(&m.encoder.layers)},
      {"model.encoder_heads", Set(&m.encoder.heads)},
      {"model.max_len", Set(&m.encoder.max_len)},
      {"model.width", Set(&m.net.width)},
      {"model.blocks", Set(&m.net.blocks)},
      {"model.heads", Set(&m.net.heads)},
      {"model.ff_mult", Set(&m.net.ff_mult)},
      {"model.diffusion_steps", Set(&m.diffusion_steps)},
      {"model.xy_scale", Set(&m.stats.xy_scale)},
      {"model.standardize", Set(&m.standardize)},
      {"model.atld", Set(&m.use_atld)},
      {"model.atld_window", Set(&m.atld.window)},
      {"model.atld_epsilon", Set(&m.atld.epsilon)},
      {"model.seed", Set(&m.seed)},
      {"train.epochs", Set(&t.epochs)},
      {"train.batch_size", Set(&t.batch_size)},
      {"train.lr_start", Set(&t.lr_start)},
      {"train.lr_peak", Set(&t.lr_peak)},
      {"train.warmup_fraction", Set(&t.warmup_fraction)},
      {"train.weight_decay", Set(&t.weight_decay)},
      {"train.grad_clip", Set(&t.grad_clip)},
      {"train.seed", Set(&t.seed)},
      {"train.max_steps", Set(&t.max_steps)},
      {"train.validation_samples", Set(&t.validation_samples)},
  };
}

void Apply(std::istream& in, const std::string& origin, RunConfig* config) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorCode::kParse, origin + ": " + e.what());
  }
  const auto setters = Setters(config);
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      Fail(ErrorCode::kSchema,
           origin + ": key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const auto it = setters.find(name);
      if (it == setters.end()) {
        Fail(ErrorCode::kSchema, origin + ": unknown key '" + name + "'");
      }
      it->second(name, value.get_value<std::string>());
    }
  }
}

}  // namespace

void ApplyConfigFile(const std::string& path, RunConfig* config) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config '" + path + "'");
  Apply(in, path, config);
}

void ApplyConfigText(const std::string& text, RunConfig* config) {
  std::istringstream in(text);
  Apply(in, "<config>", config);
}

std::string ConfigToIni(const RunConfig& c) {
  const ModelConfig& m = c.model;
  const TrainConfig& t = c.train;
  std::ostringstream out;
  out.precision(17);
  out << std::boolalpha;
  out << "[model]\n"
      << "encoder = " << EncoderKindFlag(m.encoder.kind) << "\n"
      << "encoder_dim = " << m.encoder.dim << "\n"
      << "encoder_layers = " << m.encoder.layers << "\n"
      << "encoder_heads = " << m.encoder.heads << "\n"
      << "max_len = " << m.encoder.max_len << "\n"
      << "width = " << m.net.width << "\n"
      << "blocks = " << m.net.blocks << "\n"
      << "heads = " << m.net.heads << "\n"
      << "ff_mult = " << m.net.ff_mult << "\n"
      << "diffusion_steps = " << m.diffusion_steps << "\n"
      << "xy_scale = " << m.stats.xy_scale << "\n"
      << "standardize = " << m.standardize << "\n"
      << "atld = " << m.use_atld << "\n"
      << "atld_window = " << m.atld.window << "\n"
      << "atld_epsilon = " << m.atld.epsilon << "\n"
      << "seed = " << m.seed << "\n\n"
      << "[train]\n"
      << "epochs = " << t.epochs << "\n"
      << "batch_size = " << t.batch_size << "\n"
      << "lr_start = " << t.lr_start << "\n"
      << "lr_peak = " << t.lr_peak << "\n"
      << "warmup_fraction = " << t.warmup_fraction << "\n"
      << "weight_decay = " << t.weight_decay << "\n"
      << "grad_clip = " << t.grad_clip << "\n"
      << "seed = " << t.seed << "\n"
      << "max_steps = " << t.max_steps << "\n"
      << "validation_samples = " << t.validation_samples << "\n";
  return out.str();
}

nlohmann::json ConfigToJson(const RunConfig& c) {
  const TrainConfig& t = c.train;
  return {{"model", io::ModelConfigToJson(c.model)},
          {"train",
           {{"epochs", t.epochs},
            {"batch_size", t.batch_size},
            {"lr_start", t.lr_start},
            {"lr_peak", t.lr_peak},
            {"warmup_fraction", t.warmup_fraction},
            {"weight_decay", t.weight_decay},
            {"grad_clip", t.grad_clip},
            {"beta1", t.beta1},
            {"beta2", t.beta2},
            {"adam_eps", t.adam_eps},
            {"seed", t.seed},
            {"max_steps", t.max_steps},
            {"validation_samples", t.validation_samples}}}};
}

std::string ConfigHash(const RunConfig& config) {
  return io::Fnv1aHex(ConfigToJson(config).dump());
}

synth::DriverNoise NoiseProfile(const std::string& name) {
  if (name == "default") return {};
  if (name == "none") return synth::DriverNoise::Zero();
  if (name == "high") {
    const synth::DriverNoise d;
    return {2 * d.distance_scale_sigma, 2 * d.heading_jitter_sigma,
            2 * d.lateral_drift_sigma};
  }
  Fail(ErrorCode::kInvalidArgument, "unknown noise profile '" + name + "'");
}

text::EncoderKind ParseEncoderKind(const std::string& name) {
  if (name == "trained" || name == "transformer") {
    return text::EncoderKind::kTransformer;
  }
  if (name == "bag-of-words" || name == "bag_of_words") {
    return text::EncoderKind::kBagOfWords;
  }
  Fail(ErrorCode::kSchema, "unknown encoder '" + name + "'");
}

std::string EncoderKindFlag(text::EncoderKind kind) {
  return kind == text::EncoderKind::kBagOfWords ? "bag-of-words" : "trained";
}

}  // namespace dlm
