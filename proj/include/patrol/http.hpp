// Copyright 2026 The Patrol Authors
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

#pragma once

#include <memory>
#include <string>

#include "patrol/triage.hpp"

namespace httplib {
class Server;
}

namespace patrol {

// JSON-over-HTTP front end for a TriageService.
//
//   POST /entries                 batch ingest (array, {"entries": [...]} or one object)
//   GET  /queue?status=&label=&page=&page_size=
//   GET  /entries/{id}
//   POST /entries/{id}/decision   {"label", "reviewer"}; X-Reviewer header as fallback
//   POST /retrain                 {"min_new_decisions"}
//   GET  /model
//   GET  /export/decisions        JSONL
//
// Errors come back as {"error": message} with 400 (validation), 404, 409,
// 412 (retrain precondition) or 500.
class HttpServer {
 public:
  explicit HttpServer(TriageService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Blocks until stop(). Throws IoError when the address cannot be bound.
  void listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any(const std::string& host);
  void listen_after_bind();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  TriageService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace patrol
