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

#include "dlm/guidance.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "dlm/error.h"

namespace dlm::guidance {

namespace {

using nlohmann::json;

double UnixNow() {
  return std::chrono::duration<double>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool Blank(const std::string& text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

void CheckLayout(const Layout& layout, const ArenaConfig& arena) {
  const double h = arena.half_extent;
  auto inside = [h](double x, double y) {
    return std::abs(x) <= h && std::abs(y) <= h;
  };
  if (layout.markers.size() < 5) {
    Fail(ErrorCode::kInvalidArgument, "a session needs at least 5 markers");
  }
  for (const Point& m : layout.markers) {
    if (!inside(m.x, m.y)) {
      Fail(ErrorCode::kInvalidArgument, "marker outside the arena");
    }
  }
  if (!inside(layout.robot.x(), layout.robot.y())) {
    Fail(ErrorCode::kInvalidArgument, "robot outside the arena");
  }
}

}  // namespace

std::string_view StatusName(Status status) {
  switch (status) {
    case Status::kActive: return "active";
    case Status::kReached: return "reached";
    case Status::kAbandoned: return "abandoned";
  }
  return "active";
}

Layout RandomLayout(const ArenaConfig& arena, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double lim = arena.half_extent - arena.margin;
  std::uniform_real_distribution<double> coord(-lim, lim);
  std::uniform_real_distribution<double> heading(-std::numbers::pi,
                                                 std::numbers::pi);
  std::uniform_real_distribution<double> radius(0.3, 0.8);
  Layout layout;
  layout.robot = Pose2(coord(rng), coord(rng), heading(rng));
  for (int i = 0; i < std::max(5, arena.markers); ++i) {
    layout.markers.push_back({coord(rng), coord(rng)});
  }
  for (int i = 0; i < arena.obstacles; ++i) {
    layout.obstacles.push_back({{coord(rng), coord(rng)}, radius(rng)});
  }
  return layout;
}

bool PlaceInArena(const Pose2& origin, const Trajectory& local,
                  double half_extent, Trajectory* world) {
  const Trajectory placed = Transform(origin, local);
  bool clamped = false;
  std::vector<Pose2> poses;
  poses.reserve(placed.size());
  for (const Pose2& p : placed.poses()) {
    const double x = std::clamp(p.x(), -half_extent, half_extent);
    const double y = std::clamp(p.y(), -half_extent, half_extent);
    clamped = clamped || x != p.x() || y != p.y();
    poses.emplace_back(x, y, p.theta());
  }
  *world = Trajectory(std::move(poses), placed.active_len());
  return clamped;
}

SessionManager::SessionManager(Sampler sampler, ArenaConfig arena)
    : sampler_(std::move(sampler)), arena_(arena) {}

Session SessionManager::Create(std::optional<uint64_t> seed, int target,
                               std::optional<Layout> layout) {
  const uint64_t s = seed.value_or(std::random_device{}());
  Layout l = layout.has_value() ? *std::move(layout) : RandomLayout(arena_, s);
  CheckLayout(l, arena_);
  if (target < 0 || target >= static_cast<int>(l.markers.size())) {
    Fail(ErrorCode::kInvalidArgument,
         "target marker " + std::to_string(target) + " does not exist");
  }
  auto entry = std::make_shared<Entry>();
  Session& session = entry->session;
  session.seed = s;
  session.arena = arena_;
  session.markers = std::move(l.markers);
  session.obstacles = std::move(l.obstacles);
  session.robot = l.robot;
  session.target = target;
  session.started_at = UnixNow();
  entry->rng.seed(s ^ 0x5bd1e9955bd1e995ULL);
  entry->started = std::chrono::steady_clock::now();

  std::unique_lock lock(mutex_);
  session.id = std::to_string(next_id_++);
  sessions_[session.id] = entry;
  return session;
}

std::shared_ptr<SessionManager::Entry> SessionManager::Find(
    const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    Fail(ErrorCode::kNotFound, "no session '" + id + "'");
  }
  return it->second;
}

SessionManager::Applied SessionManager::Apply(const std::string& id,
                                              const std::string& text) {
  const auto entry = Find(id);
  std::lock_guard lock(entry->mutex);
  Session& session = entry->session;
  if (session.status != Status::kActive) {
    Fail(ErrorCode::kStateConflict,
         "session " + id + " is " + std::string(StatusName(session.status)));
  }
  if (Blank(text)) Fail(ErrorCode::kEmptyCommand, "command is empty");

  const Trajectory local = sampler_(text, entry->rng());
  Applied out;
  out.clamped = PlaceInArena(session.robot, local, session.arena.half_extent,
                             &out.trajectory);
  session.robot = out.trajectory.back();
  ++session.step_count;
  const Point& goal = session.markers[session.target];
  if (std::hypot(session.robot.x() - goal.x, session.robot.y() - goal.y) <
      session.arena.goal_radius) {
    session.status = Status::kReached;
  }
  Step step;
  step.command = text;
  step.trajectory = out.trajectory;
  step.pose = session.robot;
  step.clamped = out.clamped;
  step.timestamp_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - entry->started)
                         .count();
  session.transcript.push_back(std::move(step));

  out.pose = session.robot;
  out.status = session.status;
  out.step_count = session.step_count;
  return out;
}

Session SessionManager::Get(const std::string& id) const {
  const auto entry = Find(id);
  std::lock_guard lock(entry->mutex);
  return entry->session;
}

Report SessionManager::GetReport(const std::string& id) const {
  const Session s = Get(id);
  const Point& goal = s.markers[s.target];
  Report r;
  r.final_error_m = std::hypot(s.robot.x() - goal.x, s.robot.y() - goal.y);
  r.num_steps = static_cast<int>(s.transcript.size());
  r.elapsed_s = s.transcript.empty() ? 0.0 : s.transcript.back().timestamp_s;
  r.status = s.status;
  return r;
}

Session SessionManager::Abandon(const std::string& id) {
  const auto entry = Find(id);
  std::lock_guard lock(entry->mutex);
  if (entry->session.status != Status::kActive) {
    Fail(ErrorCode::kStateConflict, "session " + id + " is not active");
  }
  entry->session.status = Status::kAbandoned;
  return entry->session;
}

size_t SessionManager::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

json PoseToJson(const Pose2& pose) {
  return json::array({pose.x(), pose.y(), pose.theta()});
}

json TrajectoryToJson(const Trajectory& traj) {
  json out = json::array();
  for (const Pose2& p : traj.active()) out.push_back(PoseToJson(p));
  return out;
}

json SessionToJson(const Session& s) {
  json markers = json::array();
  for (const Point& m : s.markers) markers.push_back({m.x, m.y});
  json obstacles = json::array();
  for (const Obstacle& o : s.obstacles) {
    obstacles.push_back(
        {{"x", o.center.x}, {"y", o.center.y}, {"radius", o.radius}});
  }
  json transcript = json::array();
  for (const Step& step : s.transcript) {
    transcript.push_back({{"command", step.command},
                          {"trajectory", TrajectoryToJson(step.trajectory)},
                          {"pose", PoseToJson(step.pose)},
                          {"clamped", step.clamped},
                          {"timestamp_s", step.timestamp_s}});
  }
  return {{"id", s.id},
          {"seed", s.seed},
          {"status", StatusName(s.status)},
          {"arena",
           {{"half_extent", s.arena.half_extent},
            {"goal_radius", s.arena.goal_radius},
            {"markers", std::move(markers)},
            {"obstacles", std::move(obstacles)}}},
          {"pose", PoseToJson(s.robot)},
          {"target_marker", s.target},
          {"step_count", s.step_count},
          {"started_at", s.started_at},
          {"transcript", std::move(transcript)}};
}

json ReportToJson(const Report& r) {
  return {{"final_error_m", r.final_error_m},
          {"num_steps", r.num_steps},
          {"elapsed_s", r.elapsed_s},
          {"status", StatusName(r.status)}};
}

}  // namespace dlm::guidance
