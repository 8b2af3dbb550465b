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

#ifndef DLM_GUIDANCE_H_
#define DLM_GUIDANCE_H_

// Interactive guidance sessions: a human issues directives one at a time and
// the generated trajectory moves a virtual robot through an arena until it
// comes within the goal radius of a target marker.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "dlm/geometry.h"
#include "json.hpp"

namespace dlm::guidance {

enum class Status { kActive, kReached, kAbandoned };
std::string_view StatusName(Status status);

struct ArenaConfig {
  double half_extent = 8.0;  // meters; the arena is the square +-half_extent
  int markers = 6;
  int obstacles = 3;         // display only
  double goal_radius = 1.0;
  double margin = 0.5;       // keep random placements off the walls

  bool operator==(const ArenaConfig&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Obstacle {
  Point center;
  double radius = 0.0;
  bool operator==(const Obstacle&) const = default;
};

struct Step {
  std::string command;
  Trajectory trajectory;  // world frame, after wall clamping
  Pose2 pose;             // robot pose after the step
  bool clamped = false;
  double timestamp_s = 0.0;  // since session start
};

struct Session {
  std::string id;
  uint64_t seed = 0;
  ArenaConfig arena;
  std::vector<Point> markers;
  std::vector<Obstacle> obstacles;
  Pose2 robot;
  int target = 0;  // marker index, used only for goal checks
  int step_count = 0;
  double started_at = 0.0;  // unix seconds
  Status status = Status::kActive;
  std::vector<Step> transcript;
};

struct Report {
  double final_error_m = 0.0;
  int num_steps = 0;
  double elapsed_s = 0.0;  // start to last directive
  Status status = Status::kActive;
};

// Optional explicit layout for scripted sessions.
struct Layout {
  Pose2 robot;
  std::vector<Point> markers;
  std::vector<Obstacle> obstacles;
};

// Random robot pose, markers and obstacles inside the arena, reproducible
// from `seed`.
Layout RandomLayout(const ArenaConfig& arena, uint64_t seed);

// Start-frame trajectory for a directive. The session engine passes only
// the text and a fresh seed; it never exposes the target.
using Sampler =
    std::function<Trajectory(const std::string& text, uint64_t seed)>;

// Places `local` at `origin` and clamps every pose to the arena. Returns
// whether any pose was clamped.
bool PlaceInArena(const Pose2& origin, const Trajectory& local,
                  double half_extent, Trajectory* world);

// Thread-safe session registry. Calls on one session are serialized;
// different sessions proceed in parallel.
class SessionManager {
 public:
  explicit SessionManager(Sampler sampler, ArenaConfig arena = {});

  // Throws kInvalidArgument for a target outside the marker list or an
  // invalid layout.
  Session Create(std::optional<uint64_t> seed, int target,
                 std::optional<Layout> layout = std::nullopt);

  struct Applied {
    Trajectory trajectory;  // world frame
    Pose2 pose;
    Status status = Status::kActive;
    int step_count = 0;
    bool clamped = false;
  };
  // Throws kNotFound, kEmptyCommand, kStateConflict (session not active);
  // sampler failures propagate.
  Applied Apply(const std::string& id, const std::string& text);

  Session Get(const std::string& id) const;
  Report GetReport(const std::string& id) const;
  // Active -> abandoned. Throws kStateConflict otherwise.
  Session Abandon(const std::string& id);

  size_t size() const;

 private:
  struct Entry {
    mutable std::mutex mutex;
    Session session;
    std::mt19937_64 rng;
    std::chrono::steady_clock::time_point started;
  };

  std::shared_ptr<Entry> Find(const std::string& id) const;

  Sampler sampler_;
  ArenaConfig arena_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  uint64_t next_id_ = 1;
};

nlohmann::json TrajectoryToJson(const Trajectory& traj);
nlohmann::json PoseToJson(const Pose2& pose);
nlohmann::json SessionToJson(const Session& session);
nlohmann::json ReportToJson(const Report& report);

}  // namespace dlm::guidance

#endif  // DLM_GUIDANCE_H_
