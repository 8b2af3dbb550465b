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

#include <arpa/inet.h>
#include <gtest/gtest.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

extern char** environ;

namespace dlm {
namespace {

using nlohmann::json;

const std::string kCli = DLM_CLI_PATH;

struct Result {
  int exit_code = -1;
  std::string out;
};

Result RunCli(const std::string& args) {
  Result r;
  FILE* pipe = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int FreePort() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  socklen_t len = sizeof(addr);
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  close(fd);
  return ntohs(addr.sin_port);
}

// One tiny trained model shared by the tests in this file.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir();
    std::ofstream(File("tiny.ini"))
        << "[model]\nencoder_dim = 16\nencoder_layers = 1\nencoder_heads = 2\n"
           "width = 32\nblocks = 1\nheads = 2\ndiffusion_steps = 10\n\n"
           "[train]\nepochs = 1\nmax_steps = 20\nvalidation_samples = 2\n";
    ASSERT_EQ(RunCli("gen-data --n 40 --seed 3 --out " + File("d.jsonl")).exit_code,
              0);
    ASSERT_EQ(RunCli("augment --in " + File("d.jsonl") + " --out " +
                  File("a.jsonl") + " --k 2 --seed 3")
                  .exit_code,
              0);
    ASSERT_EQ(RunCli("train --data " + File("a.jsonl") + " --out-checkpoint " +
                  File("m.ckpt") + " --config " + File("tiny.ini"))
                  .exit_code,
              0);
  }
  static void TearDownTestSuite() { delete dir_; }
  static std::string File(const std::string& name) { return dir_->File(name); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, GenDataIsReproducible) {
  ASSERT_EQ(RunCli("gen-data --n 25 --seed 7 --out " + File("x.jsonl")).exit_code,
            0);
  ASSERT_EQ(RunCli("gen-data --n 25 --seed 7 --out " + File("y.jsonl")).exit_code,
            0);
  const std::string x = Slurp(File("x.jsonl"));
  EXPECT_EQ(x, Slurp(File("y.jsonl")));
  EXPECT_EQ(std::count(x.begin(), x.end(), '\n'), 25);
}

TEST_F(CliTest, AugmentGrowsDataset) {
  const std::string a = Slurp(File("a.jsonl"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 40 * 3);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("gen-data --n 0 --out " + File("z.jsonl")).exit_code, 1);
  EXPECT_EQ(RunCli("no-such-command").exit_code, 1);
  EXPECT_EQ(RunCli("").exit_code, 1);
  std::ofstream(File("broken.jsonl")) << "{\"command\": 3}\n";
  EXPECT_EQ(RunCli("augment --in " + File("broken.jsonl") + " --out " +
                File("o.jsonl"))
                .exit_code,
            2);
  EXPECT_EQ(RunCli("inspect " + File("d.jsonl")).exit_code, 2);
  EXPECT_EQ(RunCli("sample --checkpoint " + File("m.ckpt") + " --command ' '")
                .exit_code,
            1);
}

TEST_F(CliTest, SampleJsonAndSvg) {
  const Result a = RunCli("sample --checkpoint " + File("m.ckpt") +
                       " --command 'Move forward 2 meters' --seed 4");
  ASSERT_EQ(a.exit_code, 0);
  const json traj = json::parse(a.out);
  ASSERT_TRUE(traj.is_array());
  EXPECT_GE(traj.size(), 1u);
  EXPECT_LE(traj.size(), 22u);
  EXPECT_EQ(traj[0].size(), 3u);
  EXPECT_EQ(RunCli("sample --checkpoint " + File("m.ckpt") +
                " --command 'Move forward 2 meters' --seed 4")
                .out,
            a.out);

  ASSERT_EQ(RunCli("sample --checkpoint " + File("m.ckpt") +
                " --command 'Turn left' --seeds 5 --emit svg --out " +
                File("t.svg"))
                .exit_code,
            0);
  const std::string svg = Slurp(File("t.svg"));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST_F(CliTest, EvalReports) {
  ASSERT_EQ(RunCli("eval --checkpoint " + File("m.ckpt") + " --test-data " +
                File("d.jsonl") + " --seeds 2 --report " + File("r.json"))
                .exit_code,
            0);
  const json report = json::parse(Slurp(File("r.json")))["results"];
  EXPECT_EQ(report["per_pass"].size(), 2u);
  EXPECT_TRUE(report["summary"].contains("sr_percent"));
  EXPECT_TRUE(report["summary"]["rmse_cm"].contains("std"));

  const std::string corrupt = "corrupt-eval --checkpoint " + File("m.ckpt") +
                              " --test-data " + File("d.jsonl") +
                              " --mode truncate --n 30 --seed 2 --emit-corrupted ";
  ASSERT_EQ(RunCli(corrupt + File("c1.jsonl")).exit_code, 0);
  ASSERT_EQ(RunCli(corrupt + File("c2.jsonl")).exit_code, 0);
  EXPECT_EQ(Slurp(File("c1.jsonl")), Slurp(File("c2.jsonl")));
}

TEST_F(CliTest, TrainingIsReproducible) {
  ASSERT_EQ(RunCli("train --data " + File("d.jsonl") + " --out-checkpoint " +
                File("r1.ckpt") + " --config " + File("tiny.ini"))
                .exit_code,
            0);
  ASSERT_EQ(RunCli("train --data " + File("d.jsonl") + " --out-checkpoint " +
                File("r2.ckpt") + " --config " + File("tiny.ini"))
                .exit_code,
            0);
  EXPECT_EQ(Slurp(File("r1.ckpt")), Slurp(File("r2.ckpt")));
}

TEST_F(CliTest, InspectAndConfig) {
  const Result r = RunCli("inspect " + File("m.ckpt"));
  ASSERT_EQ(r.exit_code, 0);
  const json info = json::parse(r.out);
  EXPECT_EQ(info["model"]["net"]["width"], 32);
  const Result c = RunCli("config");
  EXPECT_EQ(c.exit_code, 0);
  EXPECT_NE(c.out.find("epochs = 30"), std::string::npos);
}

TEST_F(CliTest, ServeAnswersAndShutsDownOnInterrupt) {
  const int port = FreePort();
  const std::string bind = "127.0.0.1:" + std::to_string(port);
  const std::string ckpt = File("m.ckpt");
  std::vector<std::string> args = {kCli,   "--log-level", "error", "serve",
                                   "--checkpoint", ckpt, "--bind", bind};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  ASSERT_EQ(posix_spawn(&pid, kCli.c_str(), nullptr, nullptr, argv.data(),
                        environ),
            0);
  httplib::Client client("127.0.0.1", port);
  httplib::Result health;
  for (int i = 0; i < 100 && !health; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    health = client.Get("/health");
  }
  ASSERT_TRUE(health);
  const json body = json::parse(health->body);
  EXPECT_EQ(body["status"], "ok");
  EXPECT_EQ(body["checkpoint_hash"].get<std::string>().size(), 16u);

  const auto created = client.Post("/session", R"({"seed": 1, "target_marker": 0})",
                                   "application/json");
  ASSERT_TRUE(created);
  const std::string id = json::parse(created->body)["id"];
  const auto started = std::chrono::steady_clock::now();
  const auto step = client.Post("/session/" + id + "/command",
                                R"({"text": "move forward 2 meters"})",
                                "application/json");
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
  ASSERT_TRUE(step);
  EXPECT_EQ(step->status, 200);
  EXPECT_LT(ms, 500.0);

  kill(pid, SIGINT);
  int status = 0;
  waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

}  // namespace
}  // namespace dlm
