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

#ifndef DLM_GUIDANCE_SERVER_H_
#define DLM_GUIDANCE_SERVER_H_

// JSON-over-HTTP front end for SessionManager.
//
//   POST /session               {"seed"?, "target_marker", "layout"?}
//   POST /session/{id}/command  {"text"}
//   POST /session/{id}/abandon
//   GET  /session/{id}
//   GET  /session/{id}/report
//   GET  /health
//
// Coordinates are meters and radians in the world frame; poses are
// [x, y, theta] arrays. Errors return {"error": code, "message": text} with
// 400 (bad input), 404 (unknown session), 409 (session not active) or 500.

#include <memory>
#include <string>

#include "dlm/guidance.h"

namespace httplib {
class Server;
}

namespace dlm::guidance {

struct ServiceInfo {
  std::string version;
  std::string checkpoint_hash;
};

class GuidanceServer {
 public:
  GuidanceServer(SessionManager& sessions, ServiceInfo info);
  ~GuidanceServer();

  GuidanceServer(const GuidanceServer&) = delete;
  GuidanceServer& operator=(const GuidanceServer&) = delete;

  // Binds `host:port` (port 0 picks a free port) and returns the port, or
  // throws kIo when binding fails.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Run();
  void Stop();
  bool running() const;

 private:
  void Routes();

  SessionManager& sessions_;
  ServiceInfo info_;
  std::unique_ptr<httplib::Server> server_;
};

// Parses an explicit layout: {"robot": [x, y, theta], "markers": [[x, y]...],
// "obstacles"?: [{"x", "y", "radius"}...]}. Throws kSchema.
Layout LayoutFromJson(const nlohmann::json& j);

}  // namespace dlm::guidance

#endif  // DLM_GUIDANCE_SERVER_H_
