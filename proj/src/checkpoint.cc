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

#include "dlm/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dlm/error.h"

namespace dlm::io {

namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic = {'D', 'L', 'M', 'C', 'K', 'P', 'T', '\0'};
constexpr size_t kPreambleBytes = 8 + 4 + 8;

template <typename U>
void PutLittle(std::string& out, U value) {
  for (size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

template <typename U>
U GetLittle(const char* p) {
  U value = 0;
  for (size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return value;
}

uint64_t Fnv1a(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Hex(uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = kDigits[v & 0xf];
  return s;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string_view EncoderKindName(text::EncoderKind kind) {
  return kind == text::EncoderKind::kBagOfWords ? "bag_of_words"
                                                : "transformer";
}

// Parses the preamble and header of `bytes`; returns the payload offset.
size_t ParseHeader(std::string_view bytes, const std::string& path,
                   CheckpointInfo& info) {
  if (bytes.size() < kPreambleBytes) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' is truncated");
  }
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' is not a checkpoint");
  }
  info.version = GetLittle<uint32_t>(bytes.data() + 8);
  if (info.version != kCheckpointVersion) {
    Fail(ErrorCode::kIncompatible,
         "'" + path + "' has format version " + std::to_string(info.version) +
             ", expected " + std::to_string(kCheckpointVersion));
  }
  const uint64_t header_len = GetLittle<uint64_t>(bytes.data() + 12);
  if (header_len > bytes.size() - kPreambleBytes) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' header is truncated");
  }
  json header;
  try {
    header = json::parse(bytes.substr(kPreambleBytes, header_len));
    info.model = ModelConfigFromJson(header.at("model"));
    info.vocabulary = text::Vocabulary::FromTokens(
        header.at("vocabulary").get<std::vector<std::string>>());
    info.training = header.value("training", json::object());
    info.payload_bytes = header.at("payload_bytes").get<uint64_t>();
    info.payload_hash = header.at("payload_fnv1a64").get<std::string>();
    info.tensors.clear();
    for (const json& t : header.at("tensors")) {
      info.tensors.push_back({t.at("name").get<std::string>(),
                              t.at("rows").get<int64_t>(),
                              t.at("cols").get<int64_t>(),
                              t.at("offset").get<uint64_t>()});
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' header is damaged: " + e.what());
  }
  return kPreambleBytes + header_len;
}

}  // namespace

nlohmann::json ModelConfigToJson(const ModelConfig& c) {
  return {
      {"encoder",
       {{"vocab_size", c.encoder.vocab_size},
        {"dim", c.encoder.dim},
        {"layers", c.encoder.layers},
        {"heads", c.encoder.heads},
        {"max_len", c.encoder.max_len},
        {"ff_mult", c.encoder.ff_mult},
        {"kind", EncoderKindName(c.encoder.kind)}}},
      {"net",
       {{"horizon", c.net.horizon},
        {"width", c.net.width},
        {"blocks", c.net.blocks},
        {"heads", c.net.heads},
        {"ff_mult", c.net.ff_mult},
        {"cond_dim", c.net.cond_dim}}},
      {"diffusion_steps", c.diffusion_steps},
      {"xy_scale", c.stats.xy_scale},
      {"standardize", c.standardize},
      {"use_atld", c.use_atld},
      {"atld", {{"window", c.atld.window}, {"epsilon", c.atld.epsilon}}},
      {"seed", c.seed},
  };
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  ModelConfig c;
  const json& e = j.at("encoder");
  c.encoder.vocab_size = e.at("vocab_size").get<int>();
  c.encoder.dim = e.at("dim").get<int>();
  c.encoder.layers = e.at("layers").get<int>();
  c.encoder.heads = e.at("heads").get<int>();
  c.encoder.max_len = e.at("max_len").get<int>();
  c.encoder.ff_mult = e.at("ff_mult").get<int>();
  c.encoder.kind = e.at("kind").get<std::string>() == "bag_of_words"
                       ? text::EncoderKind::kBagOfWords
                       : text::EncoderKind::kTransformer;
  const json& n = j.at("net");
  c.net.horizon = n.at("horizon").get<int>();
  c.net.width = n.at("width").get<int>();
  c.net.blocks = n.at("blocks").get<int>();
  c.net.heads = n.at("heads").get<int>();
  c.net.ff_mult = n.at("ff_mult").get<int>();
  c.net.cond_dim = n.at("cond_dim").get<int>();
  c.diffusion_steps = j.at("diffusion_steps").get<int>();
  c.stats.xy_scale = j.at("xy_scale").get<double>();
  c.standardize = j.at("standardize").get<bool>();
  c.use_atld = j.at("use_atld").get<bool>();
  c.atld.window = j.at("atld").at("window").get<int>();
  c.atld.epsilon = j.at("atld").at("epsilon").get<double>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

std::string Fnv1aHex(std::string_view bytes) { return Hex(Fnv1a(bytes)); }

std::string FileHash(const std::string& path) {
  return Fnv1aHex(ReadFile(path));
}

void SaveCheckpoint(const Policy& policy, const std::string& path,
                    const nlohmann::json& training) {
  std::string payload;
  json tensors = json::array();
  // Visit only reads here; it is non-const because training shares it.
  const_cast<Policy&>(policy).Visit(
      [&](const std::string& name, const nn::Matrix<Real>& m) {
        tensors.push_back({{"name", name},
                           {"rows", m.rows()},
                           {"cols", m.cols()},
                           {"offset", payload.size()}});
        for (Eigen::Index i = 0; i < m.size(); ++i) {
          PutLittle(payload,
                    std::bit_cast<uint64_t>(static_cast<double>(m.data()[i])));
        }
      });
  const auto& sched = policy.schedule();
  json header = {
      {"format_version", kCheckpointVersion},
      {"model", ModelConfigToJson(policy.config())},
      {"vocabulary", policy.vocabulary().tokens()},
      {"schedule",
       {{"steps", sched.steps},
        {"beta_start", sched.beta.front()},
        {"beta_end", sched.beta.back()}}},
      {"training", training},
      {"tensors", std::move(tensors)},
      {"payload_bytes", payload.size()},
      {"payload_fnv1a64", Fnv1aHex(payload)},
  };
  const std::string header_text = header.dump();

  std::string bytes(kMagic.begin(), kMagic.end());
  PutLittle<uint32_t>(bytes, kCheckpointVersion);
  PutLittle<uint64_t>(bytes, header_text.size());
  bytes += header_text;
  bytes += payload;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

CheckpointInfo InspectCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string preamble(kPreambleBytes, '\0');
  in.read(preamble.data(), kPreambleBytes);
  preamble.resize(static_cast<size_t>(in.gcount()));
  CheckpointInfo info;
  if (preamble.size() == kPreambleBytes) {
    const uint64_t header_len = GetLittle<uint64_t>(preamble.data() + 12);
    std::string header(std::min<uint64_t>(header_len, 1ULL << 30), '\0');
    in.read(header.data(), static_cast<std::streamsize>(header.size()));
    header.resize(static_cast<size_t>(in.gcount()));
    ParseHeader(preamble + header, path, info);
  } else {
    ParseHeader(preamble, path, info);
  }
  return info;
}

Policy LoadCheckpoint(const std::string& path, CheckpointInfo* info_out) {
  const std::string bytes = ReadFile(path);
  CheckpointInfo info;
  const size_t start = ParseHeader(bytes, path, info);
  const std::string_view payload = std::string_view(bytes).substr(start);
  if (payload.size() != info.payload_bytes) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' payload has " +
                                  std::to_string(payload.size()) +
                                  " bytes, header declares " +
                                  std::to_string(info.payload_bytes));
  }
  if (Fnv1aHex(payload) != info.payload_hash) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' payload hash mismatch");
  }

  Policy policy(info.model, info.vocabulary);
  if (!(policy.config() == info.model)) {
    Fail(ErrorCode::kCorrupt,
         "'" + path + "' model configuration is inconsistent");
  }
  size_t index = 0;
  policy.Visit([&](const std::string& name, nn::Matrix<Real>& m) {
    if (index >= info.tensors.size()) {
      Fail(ErrorCode::kCorrupt, "'" + path + "' lacks tensor " + name);
    }
    const TensorEntry& t = info.tensors[index++];
    if (t.name != name || t.rows != m.rows() || t.cols != m.cols() ||
        t.offset + 8 * static_cast<uint64_t>(m.size()) > payload.size()) {
      Fail(ErrorCode::kCorrupt, "'" + path + "' tensor " + t.name +
                                    " does not match the architecture");
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<Real>(std::bit_cast<double>(
          GetLittle<uint64_t>(payload.data() + t.offset + 8 * i)));
    }
  });
  if (index != info.tensors.size()) {
    Fail(ErrorCode::kCorrupt, "'" + path + "' has unexpected extra tensors");
  }
  if (info_out != nullptr) *info_out = std::move(info);
  return policy;
}

}  // namespace dlm::io
