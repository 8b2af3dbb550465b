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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <thread>

#include "dlm/guidance_server.h"
#include "dlm/synth.h"
#include "httplib.h"
#include "test_util.h"

namespace dlm::guidance {
namespace {

using nlohmann::json;
using std::numbers::pi;

// Follows commands exactly; keeps these tests independent of training.
Trajectory IdealSampler(const std::string& text, uint64_t) {
  return synth::IdealTrajectory(synth::ParseCommand(text));
}

Layout FixedLayout(Pose2 robot) {
  Layout layout;
  layout.robot = robot;
  layout.markers = {{4, 0}, {-4, 0}, {0, 4}, {0, -4}, {5, 5}, {1, 3}};
  return layout;
}

TEST(LayoutTest, SeededAndInsideArena) {
  const ArenaConfig arena;
  EXPECT_EQ(RandomLayout(arena, 5).markers, RandomLayout(arena, 5).markers);
  std::set<std::vector<std::pair<double, double>>> seen;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const Layout l = RandomLayout(arena, seed);
    ASSERT_GE(l.markers.size(), 5u);
    std::vector<std::pair<double, double>> key;
    for (const Point& m : l.markers) {
      EXPECT_LE(std::abs(m.x), arena.half_extent);
      EXPECT_LE(std::abs(m.y), arena.half_extent);
      key.emplace_back(m.x, m.y);
    }
    EXPECT_LE(std::abs(l.robot.x()), arena.half_extent);
    seen.insert(key);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(PlaceInArenaTest, ComposesAndClamps) {
  const Trajectory local = synth::IdealTrajectory(
      synth::ParseCommand("move forward 2 meters"));
  Trajectory world;
  EXPECT_FALSE(PlaceInArena(Pose2(1, 1, pi / 2), local, 8.0, &world));
  EXPECT_NEAR(world.back().x(), 1.0, 1e-12);
  EXPECT_NEAR(world.back().y(), 3.0, 1e-12);
  const Trajectory back = ToStartFrame(world);
  for (int i = 0; i < local.active_len(); ++i) {
    EXPECT_NEAR(back[i].x(), local[i].x(), 1e-9);
    EXPECT_NEAR(back[i].y(), local[i].y(), 1e-9);
  }
  EXPECT_TRUE(PlaceInArena(Pose2(7.5, 0, 0), local, 8.0, &world));
  EXPECT_EQ(world.back().x(), 8.0);
}

TEST(SessionManagerTest, SeededCreationIsReproducible) {
  SessionManager a(IdealSampler), b(IdealSampler);
  const Session sa = a.Create(42, 0);
  const Session sb = b.Create(42, 0);
  EXPECT_EQ(sa.markers, sb.markers);
  EXPECT_EQ(sa.robot, sb.robot);
  EXPECT_EQ(sa.status, Status::kActive);
  EXPECT_EQ(sa.step_count, 0);
  EXPECT_NE(a.Create(std::nullopt, 1).id, sa.id);
}

TEST(SessionManagerTest, CreateValidation) {
  SessionManager m(IdealSampler);
  testing::ExpectError(ErrorCode::kInvalidArgument, [&] { m.Create(1, 6); });
  testing::ExpectError(ErrorCode::kInvalidArgument, [&] { m.Create(1, -1); });
  Layout few = FixedLayout(Pose2());
  few.markers.resize(4);
  testing::ExpectError(ErrorCode::kInvalidArgument,
                       [&] { m.Create(1, 0, few); });
  Layout outside = FixedLayout(Pose2());
  outside.markers[0] = {9, 0};
  testing::ExpectError(ErrorCode::kInvalidArgument,
                       [&] { m.Create(1, 0, outside); });
}

TEST(SessionManagerTest, WorldFrameComposition) {
  SessionManager m(IdealSampler);
  const Session s = m.Create(1, 4, FixedLayout(Pose2(1, 1, pi / 2)));
  const auto applied = m.Apply(s.id, "move forward 2 meters");
  EXPECT_NEAR(applied.pose.x(), 1.0, 1e-9);
  EXPECT_NEAR(applied.pose.y(), 3.0, 1e-9);
  EXPECT_NEAR(applied.pose.theta(), pi / 2, 1e-9);
  EXPECT_EQ(applied.trajectory.front(), Pose2(1, 1, pi / 2));
  EXPECT_EQ(applied.step_count, 1);
}

TEST(SessionManagerTest, ReachesTargetThenRejectsCommands) {
  SessionManager m(IdealSampler);
  const Session s = m.Create(1, 0, FixedLayout(Pose2()));
  EXPECT_EQ(m.GetReport(s.id).num_steps, 0);
  EXPECT_EQ(m.Apply(s.id, "move forward 2 meters").status, Status::kActive);
  const auto last = m.Apply(s.id, "go ahead 2 meters");
  EXPECT_EQ(last.status, Status::kReached);
  testing::ExpectError(ErrorCode::kStateConflict,
                       [&] { m.Apply(s.id, "turn left"); });
  testing::ExpectError(ErrorCode::kStateConflict, [&] { m.Abandon(s.id); });

  const Session done = m.Get(s.id);
  const Report r = m.GetReport(s.id);
  ASSERT_EQ(done.transcript.size(), 2u);
  EXPECT_EQ(r.num_steps, 2);
  EXPECT_EQ(r.status, Status::kReached);
  EXPECT_LT(r.final_error_m, 1.0);
  EXPECT_NEAR(r.final_error_m,
              std::hypot(done.robot.x() - 4, done.robot.y()), 1e-12);
  EXPECT_EQ(r.elapsed_s, done.transcript.back().timestamp_s);
  EXPECT_LE(done.transcript[0].timestamp_s, done.transcript[1].timestamp_s);
}

TEST(SessionManagerTest, AbandonAndErrors) {
  SessionManager m(IdealSampler);
  const Session s = m.Create(2, 1, FixedLayout(Pose2()));
  testing::ExpectError(ErrorCode::kEmptyCommand, [&] { m.Apply(s.id, " "); });
  EXPECT_EQ(m.Abandon(s.id).status, Status::kAbandoned);
  testing::ExpectError(ErrorCode::kStateConflict,
                       [&] { m.Apply(s.id, "turn left"); });
  testing::ExpectError(ErrorCode::kNotFound, [&] { m.Get("nope"); });
  testing::ExpectError(ErrorCode::kNotFound, [&] { m.GetReport("nope"); });
}

TEST(SessionManagerTest, SamplerNeverSeesTarget) {
  std::vector<std::string> texts;
  SessionManager m([&](const std::string& text, uint64_t seed) {
    texts.push_back(text);
    return IdealSampler(text, seed);
  });
  const Session s = m.Create(3, 2, FixedLayout(Pose2()));
  m.Apply(s.id, "turn left");
  EXPECT_EQ(texts, std::vector<std::string>{"turn left"});
}

TEST(SessionManagerTest, ConcurrentSessions) {
  SessionManager m(IdealSampler);
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(m.Create(i, 0).id);
  std::vector<std::thread> threads;
  for (const std::string& id : ids) {
    threads.emplace_back([&m, id] {
      for (int k = 0; k < 20; ++k) m.Apply(id, "turn slightly left");
    });
  }
  for (auto& t : threads) t.join();
  for (const std::string& id : ids) EXPECT_EQ(m.Get(id).step_count, 20);
  EXPECT_EQ(m.size(), 8u);
}

class ServerTest : public ::testing::Test {
 protected:
  ServerTest()
      : manager_(IdealSampler), server_(manager_, {"9.9.9", "abc123"}) {
    port_ = server_.Bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.Run(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 200 && !server_.running(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  ~ServerTest() override {
    server_.Stop();
    thread_.join();
  }

  std::pair<int, json> Post(const std::string& path, const json& body) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body)};
  }
  std::pair<int, json> Get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body)};
  }

  SessionManager manager_;
  GuidanceServer server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, Health) {
  const auto [status, body] = Get("/health");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["version"], "9.9.9");
  EXPECT_EQ(body["checkpoint_hash"], "abc123");
}

TEST_F(ServerTest, ScriptedSession) {
  json layout = {{"robot", {0.0, 0.0, 0.0}},
                 {"markers", {{4, 0}, {-4, 0}, {0, 4}, {0, -4}, {5, 5}}},
                 {"obstacles", {{{"x", 2.0}, {"y", 2.0}, {"radius", 0.5}}}}};
  auto [status, created] =
      Post("/session", {{"seed", 7}, {"target_marker", 0}, {"layout", layout}});
  ASSERT_EQ(status, 200) << created.dump();
  const std::string id = created["id"];
  EXPECT_EQ(created["status"], "active");
  EXPECT_EQ(created["arena"]["markers"].size(), 5u);

  auto [s1, step1] = Post("/session/" + id + "/command",
                          {{"text", "Move forward 2 meters"}});
  ASSERT_EQ(s1, 200) << step1.dump();
  EXPECT_EQ(step1["step_count"], 1);
  EXPECT_EQ(step1["status"], "active");
  EXPECT_NEAR(step1["pose"][0].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(step1["trajectory"].back(), step1["pose"]);

  auto [s2, step2] =
      Post("/session/" + id + "/command", {{"text", "go ahead 2 meters"}});
  EXPECT_EQ(step2["status"], "reached");

  auto [s3, conflict] =
      Post("/session/" + id + "/command", {{"text", "turn left"}});
  EXPECT_EQ(s3, 409);
  EXPECT_EQ(conflict["error"], "state_conflict");

  auto [s4, state] = Get("/session/" + id);
  EXPECT_EQ(s4, 200);
  EXPECT_EQ(state["transcript"].size(), 2u);
  auto [s5, report] = Get("/session/" + id + "/report");
  EXPECT_EQ(s5, 200);
  EXPECT_EQ(report["num_steps"], 2);
  EXPECT_EQ(report["status"], "reached");
  EXPECT_LT(report["final_error_m"].get<double>(), 1.0);
}

TEST_F(ServerTest, ErrorStatuses) {
  EXPECT_EQ(Post("/session", {{"seed", 1}}).first, 400);
  EXPECT_EQ(Post("/session", {{"target_marker", 99}}).first, 400);
  EXPECT_EQ(Get("/session/missing").first, 404);
  EXPECT_EQ(Post("/session/missing/command", {{"text", "go"}}).first, 404);
  const std::string id =
      Post("/session", {{"target_marker", 1}}).second["id"];
  EXPECT_EQ(Post("/session/" + id + "/command", {{"text", ""}}).first, 400);
  EXPECT_EQ(Post("/session/" + id + "/command", json::object()).first, 400);
  auto res = client_->Post("/session", "{oops", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(Post("/session/" + id + "/abandon", json::object()).second["status"],
            "abandoned");
}

TEST_F(ServerTest, CorsPreflight) {
  auto res = client_->Options("/session");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(ServerBindTest, BusyPortIsIoError) {
  SessionManager m(IdealSampler);
  GuidanceServer first(m, {});
  const int port = first.Bind("127.0.0.1", 0);
  GuidanceServer second(m, {});
  testing::ExpectError(ErrorCode::kIo,
                       [&] { second.Bind("127.0.0.1", port); });
}

}  // namespace
}  // namespace dlm::guidance
