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

#include "dlm/dataset.h"

#include <fstream>

#include "dlm/error.h"
#include "json.hpp"

namespace dlm::io {

namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(int line_no, const std::string& what) {
  Fail(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string_view SourceName(SampleSource source) {
  switch (source) {
    case SampleSource::kHumanSim: return "human_sim";
    case SampleSource::kSynthetic: return "synthetic";
    case SampleSource::kAugmented: return "augmented";
  }
  return "human_sim";
}

SampleSource ParseSource(std::string_view name) {
  if (name == "human_sim") return SampleSource::kHumanSim;
  if (name == "synthetic") return SampleSource::kSynthetic;
  if (name == "augmented") return SampleSource::kAugmented;
  Fail(ErrorCode::kSchema, "unknown sample source '" + std::string(name) + "'");
}

std::string SampleToJsonLine(const Sample& sample) {
  json traj = json::array();
  for (const Pose2& p : sample.trajectory.poses()) {
    traj.push_back({p.x(), p.y(), p.theta()});
  }
  json obj;
  obj["command"] = sample.command;
  obj["trajectory"] = std::move(traj);
  obj["active_len"] = sample.trajectory.active_len();
  obj["source"] = SourceName(sample.source);
  obj["family_id"] = sample.family_id;
  return obj.dump();
}

Sample SampleFromJsonLine(std::string_view line, int line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse,
         "line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) SchemaError(line_no, "expected an object");
  for (const char* key :
       {"command", "trajectory", "active_len", "source", "family_id"}) {
    if (!obj.contains(key)) SchemaError(line_no, std::string("missing ") + key);
  }
  if (!obj["command"].is_string()) SchemaError(line_no, "command not a string");
  if (!obj["active_len"].is_number_integer()) {
    SchemaError(line_no, "active_len not an integer");
  }
  if (!obj["family_id"].is_number_integer()) {
    SchemaError(line_no, "family_id not an integer");
  }
  if (!obj["source"].is_string()) SchemaError(line_no, "source not a string");
  const json& rows = obj["trajectory"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != kHorizon) {
    SchemaError(line_no, "trajectory must have " + std::to_string(kHorizon) +
                             " rows, got " +
                             std::to_string(rows.is_array() ? rows.size() : 0));
  }
  std::vector<Pose2> poses;
  poses.reserve(kHorizon);
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number() ||
        !row[1].is_number() || !row[2].is_number()) {
      SchemaError(line_no, "trajectory rows must be [x, y, theta]");
    }
    try {
      poses.emplace_back(row[0].get<double>(), row[1].get<double>(),
                         row[2].get<double>());
    } catch (const Error& e) {
      SchemaError(line_no, e.what());
    }
  }
  const int active = obj["active_len"].get<int>();
  if (active < 1 || active > kHorizon) {
    SchemaError(line_no, "active_len outside [1, " + std::to_string(kHorizon) +
                             "]");
  }
  Sample s;
  s.command = obj["command"].get<std::string>();
  s.trajectory = Trajectory(std::move(poses), active);
  try {
    s.source = ParseSource(obj["source"].get<std::string>());
  } catch (const Error& e) {
    SchemaError(line_no, e.what());
  }
  s.family_id = obj["family_id"].get<int>();
  return s;
}

void WriteDataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  for (const Sample& s : dataset.samples) out << SampleToJsonLine(s) << '\n';
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

Dataset ReadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + path);
  Dataset ds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ds.samples.push_back(SampleFromJsonLine(line, line_no));
  }
  return ds;
}

}  // namespace dlm::io
