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

#include "patrol/http.hpp"

#include <httplib.h>

#include "patrol/error.hpp"

namespace patrol {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(const std::exception& ex) {
  if (dynamic_cast<const NotFoundError*>(&ex)) return 404;
  if (dynamic_cast<const ConflictError*>(&ex)) return 409;
  if (dynamic_cast<const PreconditionError*>(&ex)) return 412;
  if (dynamic_cast<const ValidationError*>(&ex) || dynamic_cast<const ParseError*>(&ex) ||
      dynamic_cast<const json::exception*>(&ex)) {
    return 400;
  }
  return 500;
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const std::exception& ex) {
      send_json(res, status_for(ex), {{"error", ex.what()}});
    }
  };
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& ex) {
    throw ValidationError(std::string("request body is not JSON: ") + ex.what());
  }
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw ValidationError("");
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ValidationError(std::string("query parameter '") + name + "' must be a non-negative integer");
  }
}

}  // namespace

HttpServer::HttpServer(TriageService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Post("/entries", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (body.is_object() && body.contains("entries")) body = body.at("entries");
    if (body.is_object()) body = json::array({body});
    if (!body.is_array()) throw ValidationError("expected an entry, a list of entries or {\"entries\": [...]}");
    std::vector<Entry> entries;
    for (const auto& j : body) entries.push_back(entry_from_json(j));
    const auto ids = service_.ingest(entries);
    send_json(res, 201, {{"ids", ids}});
  }));

  s.Get("/queue", guarded([this](const httplib::Request& req, httplib::Response& res) {
    QueueFilter f;
    f.page_size = service_.config().page_size;
    if (req.has_param("status") && !req.get_param_value("status").empty()) {
      f.status = parse_status(req.get_param_value("status"));
    }
    if (req.has_param("label") && !req.get_param_value("label").empty()) {
      f.label = parse_label(req.get_param_value("label"));
    }
    f.page = size_param(req, "page", 0);
    f.page_size = size_param(req, "page_size", f.page_size);
    const QueuePage page = service_.queue(f);
    json items = json::array();
    for (const auto& item : page.items) items.push_back(to_json(item));
    send_json(res, 200, {{"items", items}, {"total", page.total}, {"page", page.page}, {"page_size", page.page_size}});
  }));

  s.Get(R"(/entries/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, to_json(service_.item(req.matches[1])));
  }));

  s.Post(R"(/entries/([^/]+)/decision)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    if (!body.is_object() || !body.contains("label")) throw ValidationError("decision needs a label");
    std::string reviewer = body.value("reviewer", std::string());
    if (reviewer.empty()) reviewer = req.get_header_value("X-Reviewer");
    const QueueItem item =
        service_.decide(req.matches[1], parse_label(body.at("label").get<std::string>()), reviewer);
    send_json(res, 200, to_json(item));
  }));

  s.Post("/retrain", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    std::uint64_t min_new = 1;
    if (body.is_object() && body.contains("min_new_decisions")) {
      const auto& v = body.at("min_new_decisions");
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError("min_new_decisions must be a non-negative integer");
      }
      min_new = v.get<std::uint64_t>();
    }
    send_json(res, 200, to_json(service_.retrain(min_new)));
  }));

  s.Get("/model", guarded([this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, to_json(service_.model_info()));
  }));

  s.Get("/export/decisions", guarded([this](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content(service_.export_decisions(), "application/x-ndjson");
  }));
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  listen_after_bind();
}

int HttpServer::bind_any(const std::string& host) {
  const int port = server_->bind_to_any_port(host);
  if (port < 0) throw IoError("cannot bind an ephemeral port on " + host);
  return port;
}

void HttpServer::listen_after_bind() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace patrol
