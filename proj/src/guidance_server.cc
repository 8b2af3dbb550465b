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

#include "dlm/guidance_server.h"

#include <spdlog/spdlog.h>

#include <chrono>

#include "dlm/error.h"
#include "httplib.h"

namespace dlm::guidance {

namespace {

using nlohmann::json;
using Handler = std::function<json(const httplib::Request&)>;

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptyCommand:
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kStateConflict:
      return 409;
    default:
      return 500;
  }
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), "application/json");
}

json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) Fail(ErrorCode::kSchema, "body must be an object");
    return body;
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("malformed JSON body: ") + e.what());
  }
}

// Runs `handler`, mapping errors to status codes and logging latency.
httplib::Server::Handler Wrap(Handler handler) {
  return [handler = std::move(handler)](const httplib::Request& req,
                                        httplib::Response& res) {
    const auto started = std::chrono::steady_clock::now();
    try {
      Reply(res, 200, handler(req));
    } catch (const Error& e) {
      Reply(res, HttpStatus(e.code()),
            {{"error", ErrorCodeName(e.code())}, {"message", e.what()}});
    } catch (const json::exception& e) {
      Reply(res, 400, {{"error", "schema"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      Reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
    spdlog::info("{} {} -> {} in {:.1f} ms", req.method, req.path, res.status,
                 std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - started)
                     .count());
  };
}

}  // namespace

Layout LayoutFromJson(const json& j) {
  try {
    Layout layout;
    const json& robot = j.at("robot");
    layout.robot = Pose2(robot.at(0).get<double>(), robot.at(1).get<double>(),
                         robot.at(2).get<double>());
    for (const json& m : j.at("markers")) {
      layout.markers.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
    }
    for (const json& o : j.value("obstacles", json::array())) {
      layout.obstacles.push_back(
          {{o.at("x").get<double>(), o.at("y").get<double>()},
           o.at("radius").get<double>()});
    }
    return layout;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("invalid layout: ") + e.what());
  }
}

GuidanceServer::GuidanceServer(SessionManager& sessions, ServiceInfo info)
    : sessions_(sessions),
      info_(std::move(info)),
      server_(std::make_unique<httplib::Server>()) {
  // httplib defaults to SO_REUSEPORT, which would let a second service
  // share the port and split traffic. REUSEADDR still allows fast restarts.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  Routes();
}

GuidanceServer::~GuidanceServer() { Stop(); }

void GuidanceServer::Routes() {
  server_->Get("/health", Wrap([this](const httplib::Request&) -> json {
    return {{"status", "ok"},
            {"version", info_.version},
            {"checkpoint_hash", info_.checkpoint_hash}};
  }));

  server_->Post("/session", Wrap([this](const httplib::Request& req) -> json {
    const json body = ParseBody(req);
    if (!body.contains("target_marker")) {
      Fail(ErrorCode::kSchema, "target_marker is required");
    }
    std::optional<uint64_t> seed;
    if (body.contains("seed") && !body["seed"].is_null()) {
      seed = body["seed"].get<uint64_t>();
    }
    std::optional<Layout> layout;
    if (body.contains("layout")) layout = LayoutFromJson(body["layout"]);
    return SessionToJson(sessions_.Create(
        seed, body["target_marker"].get<int>(), std::move(layout)));
  }));

  server_->Post(R"(/session/([^/]+)/command)",
                Wrap([this](const httplib::Request& req) -> json {
                  const json body = ParseBody(req);
                  if (!body.contains("text") || !body["text"].is_string()) {
                    Fail(ErrorCode::kSchema, "text is required");
                  }
                  const auto applied = sessions_.Apply(
                      req.matches[1].str(), body["text"].get<std::string>());
                  return {{"trajectory", TrajectoryToJson(applied.trajectory)},
                          {"pose", PoseToJson(applied.pose)},
                          {"status", StatusName(applied.status)},
                          {"step_count", applied.step_count},
                          {"clamped", applied.clamped}};
                }));

  server_->Post(R"(/session/([^/]+)/abandon)",
                Wrap([this](const httplib::Request& req) -> json {
                  return SessionToJson(sessions_.Abandon(req.matches[1].str()));
                }));

  server_->Get(R"(/session/([^/]+))",
               Wrap([this](const httplib::Request& req) -> json {
                 return SessionToJson(sessions_.Get(req.matches[1].str()));
               }));

  server_->Get(R"(/session/([^/]+)/report)",
               Wrap([this](const httplib::Request& req) -> json {
                 return ReportToJson(sessions_.GetReport(req.matches[1].str()));
               }));

  // Browser preflight for the web console.
  server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

int GuidanceServer::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host)
                              : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    Fail(ErrorCode::kIo,
         "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void GuidanceServer::Run() { server_->listen_after_bind(); }

void GuidanceServer::Stop() {
  if (server_) server_->stop();
}

bool GuidanceServer::running() const { return server_->is_running(); }

}  // namespace dlm::guidance
