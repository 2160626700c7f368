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

#include <doctest.h>

#include <httplib.h>

#include <sstream>
#include <thread>

#include "patrol/cli.hpp"
#include "patrol/error.hpp"
#include "patrol/http.hpp"
#include "patrol/io.hpp"
#include "patrol/triage.hpp"
#include "support.hpp"

using namespace patrol;
using nlohmann::json;

namespace {

const Dataset& base() {
  static const Dataset d = load_dataset(testing::kData / "synthetic" / "corpus.jsonl");
  return d;
}

const RulePatternSet& rules() {
  static const RulePatternSet r = RulePatternSet::load(testing::kData / "lexicons" / "rules.tsv");
  return r;
}

std::shared_ptr<const Pipeline> pipe() {
  static const auto p = std::make_shared<const Pipeline>(testing::shipped());
  return p;
}

Clock fixed_clock() {
  auto n = std::make_shared<int>(0);
  return [n] { return "2026-02-01T00:00:" + std::to_string(10 + (*n)++ % 50) + "Z"; };
}

Entry entry(const std::string& id, const std::string& text) {
  Entry e;
  e.id = id;
  e.text = text;
  return e;
}

}  // namespace

TEST_CASE("ingest is all or nothing") {
  TriageService svc(pipe(), rules(), base(), ServiceConfig{}, fixed_clock());
  CHECK(svc.model_info().version == 1);
  svc.ingest({entry("a", "kimoi shine"), entry("b", "kyou wa ii hi")});
  CHECK(svc.size() == 2);
  CHECK_THROWS_AS(svc.ingest({entry("c", "x"), entry("a", "dup")}), ConflictError);
  CHECK_THROWS_AS(svc.ingest({entry("d", "x"), entry("e", "  ")}), ValidationError);
  CHECK_THROWS_AS(svc.ingest({entry("f", "x"), entry("f", "y")}), ConflictError);
  CHECK(svc.size() == 2);
  CHECK_THROWS_AS(svc.item("c"), NotFoundError);
  const auto a = svc.item("a");
  CHECK(a.status == ItemStatus::Pending);
  CHECK(a.machine.model_version == 1);
  CHECK(a.machine.final != TriLabel::Normal);
}

TEST_CASE("decisions, retrain preconditions and export") {
  TriageService svc(pipe(), rules(), base(), ServiceConfig{}, fixed_clock());
  svc.ingest({entry("a", "kimoi shine"), entry("b", "kyou wa ii hi"), entry("c", "ano ko debu")});
  CHECK_THROWS_AS(svc.retrain(0), PreconditionError);
  CHECK_THROWS_AS(svc.decide("zz", TriLabel::Normal, "r"), NotFoundError);
  CHECK_THROWS_AS(svc.decide("a", TriLabel::Normal, " "), ValidationError);
  const auto d = svc.decide("a", TriLabel::Harmful, "rev");
  CHECK(d.status == ItemStatus::Decided);
  CHECK(d.decision->reviewer == "rev");
  svc.decide("a", TriLabel::Doubtful, "rev2");
  CHECK(svc.item("a").decision_count == 2);
  CHECK(svc.item("a").decision->label == TriLabel::Doubtful);
  CHECK_THROWS_AS(svc.retrain(3), PreconditionError);
  const auto info = svc.retrain(2);
  CHECK(info.version == 2);
  CHECK(info.decisions_used == 2);
  CHECK(svc.item("b").machine.model_version == 2);
  CHECK_THROWS_AS(svc.retrain(1), PreconditionError);

  const auto lines = split(svc.export_decisions(), '\n');
  REQUIRE(lines.size() == 2);  // one record plus the trailing newline
  const auto rec = json::parse(lines[0]);
  CHECK(rec["id"] == "a");
  CHECK(rec["label"] == "D");
}

TEST_CASE("queue filters and pages") {
  TriageService svc(pipe(), rules(), base(), ServiceConfig{}, fixed_clock());
  std::vector<Entry> es;
  for (int i = 0; i < 9; ++i) es.push_back(entry("q" + std::to_string(i), i % 3 ? "kyou wa ii hi" : "baka kimoi shine"));
  svc.ingest(es);
  svc.decide("q1", TriLabel::Normal, "r");
  QueueFilter f;
  f.page_size = 4;
  const auto p0 = svc.queue(f);
  CHECK(p0.total == 9);
  CHECK(p0.items.size() == 4);
  f.page = 2;
  CHECK(svc.queue(f).items.size() == 1);
  f.page = 9;
  CHECK(svc.queue(f).items.empty());
  QueueFilter pending;
  pending.status = ItemStatus::Pending;
  CHECK(svc.queue(pending).total == 8);
  QueueFilter normal;
  normal.label = TriLabel::Normal;
  for (const auto& it : svc.queue(normal).items) CHECK(it.machine.final == TriLabel::Normal);
  const auto all = svc.queue(QueueFilter{}).items;
  for (std::size_t i = 1; i < all.size(); ++i) CHECK_FALSE(queue_before(all[i], all[i - 1]));
  QueueFilter zero;
  zero.page_size = 0;
  CHECK_THROWS_AS(svc.queue(zero), ValidationError);
}

TEST_CASE("service resumes from its event log") {
  testing::TempDir dir("svc");
  ServiceConfig cfg;
  cfg.data_dir = dir.path();
  std::string before;
  {
    TriageService svc(pipe(), rules(), base(), cfg, fixed_clock());
    svc.ingest({entry("a", "kimoi shine"), entry("b", "kyou wa ii hi")});
    svc.decide("a", TriLabel::Harmful, "r");
    svc.retrain(1);
    before = svc.snapshot_dump();
  }
  CHECK(std::filesystem::exists(dir.path() / "models" / "v1.json"));
  CHECK(std::filesystem::exists(dir.path() / "models" / "v2.json"));
  TriageService again(pipe(), rules(), base(), cfg, fixed_clock());
  CHECK(again.snapshot_dump() == before);
  CHECK(again.model_info().version == 2);
  CHECK(json::parse(read_file(dir.path() / "snapshot.json")).dump() == json::parse(before).dump());
  again.ingest({entry("c", "ano ko debu")});
  CHECK(again.item("c").machine.model_version == 2);
}

TEST_CASE("event store rejects inapplicable events") {
  Snapshot s;
  CHECK_THROWS_AS(s.apply({{"type", "decision"}, {"seq", 1}, {"id", "x"}, {"label", "N"}, {"reviewer", "r"}, {"at", "t"}}),
                  ValidationError);
  CHECK_THROWS_AS(s.apply({{"type", "bogus"}, {"seq", 1}}), ValidationError);
  EventStore store;
  store.append({{"type", "ingest"}, {"at", "t"}, {"entry", to_json(entry("x", "kyou"))}});
  CHECK(store.events().back()["seq"] == 1);
  CHECK(EventStore::replay(store.events()).dump() == store.snapshot().dump());
}

TEST_CASE("http api") {
  TriageService svc(pipe(), rules(), base(), ServiceConfig{}, fixed_clock());
  HttpServer server(svc);
  const int port = server.bind_any("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);

  auto r = cli.Post("/entries", R"([{"id":"a","text":"kimoi shine"},{"id":"b","text":"kyou wa ii"}])", "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(json::parse(r->body)["ids"] == json::array({"a", "b"}));
  r = cli.Post("/entries", R"({"id":"c","text":"ano ko debu"})", "application/json");
  CHECK(r->status == 201);
  r = cli.Post("/entries", R"({"id":"c","text":"again"})", "application/json");
  CHECK(r->status == 409);
  r = cli.Post("/entries", "{not json", "application/json");
  CHECK(r->status == 400);

  r = cli.Get("/queue?page_size=2");
  REQUIRE(r->status == 200);
  auto q = json::parse(r->body);
  CHECK(q["total"] == 3);
  CHECK(q["items"].size() == 2);
  CHECK(cli.Get("/queue?page_size=x")->status == 400);
  CHECK(cli.Get("/queue?status=weird")->status == 400);

  CHECK(cli.Get("/entries/a")->status == 200);
  CHECK(cli.Get("/entries/zzz")->status == 404);

  CHECK(cli.Post("/retrain", "", "application/json")->status == 412);
  httplib::Headers h = {{"X-Reviewer", "hdr"}};
  r = cli.Post("/entries/a/decision", h, R"({"label":"H"})", "application/json");
  REQUIRE(r->status == 200);
  CHECK(json::parse(r->body)["decision"]["reviewer"] == "hdr");
  CHECK(cli.Post("/entries/a/decision", R"({"label":"X","reviewer":"r"})", "application/json")->status == 400);
  CHECK(cli.Post("/retrain", R"({"min_new_decisions":-1})", "application/json")->status == 400);
  r = cli.Post("/retrain", R"({"min_new_decisions":1})", "application/json");
  REQUIRE(r->status == 200);
  CHECK(json::parse(r->body)["version"] == 2);
  CHECK(json::parse(cli.Get("/model")->body)["version"] == 2);
  r = cli.Get("/export/decisions");
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type") == "application/x-ndjson");
  CHECK(json::parse(split(r->body, '\n')[0])["id"] == "a");

  server.stop();
  t.join();
}

TEST_CASE("cli exit codes and outputs") {
  std::ostringstream out, err;
  CHECK(run_cli({"frobnicate"}, out, err) == 1);
  CHECK(run_cli({}, out, err) == 1);
  CHECK(run_cli({"--help"}, out, err) == 0);
  CHECK(run_cli({"train", "/nonexistent/corpus.jsonl"}, out, err) == 2);

  testing::TempDir dir("cli");
  const auto model = (dir.path() / "m.json").string();
  const auto corpus = (testing::kData / "synthetic" / "corpus.jsonl").string();
  out.str("");
  CHECK(run_cli({"--model", model, "train", corpus}, out, err) == 0);
  CHECK(json::parse(out.str())["entries"] == 300);

  write_file_atomic(dir.path() / "empty.jsonl", "");
  out.str("");
  CHECK(run_cli({"--model", model, "classify", (dir.path() / "empty.jsonl").string()}, out, err) == 0);
  CHECK(out.str().empty());

  write_file_atomic(dir.path() / "in.jsonl", "{\"id\":\"x\",\"text\":\"Sato-kun kimoi\"}\n");
  out.str("");
  CHECK(run_cli({"--model", model, "classify", (dir.path() / "in.jsonl").string()}, out, err) == 0);
  const auto rec = json::parse(out.str());
  CHECK(rec["id"] == "x");
  CHECK(rec["final"] == "H");

  out.str("");
  CHECK(run_cli({"normalize", "kimoooi", "kimosu"}, out, err) == 0);
  CHECK(out.str().find("kimoi") != std::string::npos);

  out.str("");
  CHECK(run_cli({"affect", "--text", "Kyo wa nante kimochi ii hi nanda !"}, out, err) == 0);
  CHECK(json::parse(out.str())["emotive"] == true);

  write_file_atomic(dir.path() / "cfg.json", R"({"bogus": 1})");
  CHECK(run_cli({"--config", (dir.path() / "cfg.json").string(), "normalize", "x"}, out, err) == 1);
  CHECK(run_cli({"--weighting", "bm25", "eval", corpus}, out, err) == 1);
}

TEST_CASE("cli config merging") {
  auto c = CliConfig::defaults();
  c.merge({{"k", 5}, {"seed", 7}, {"main", "pos"}});
  CHECK(c.k == 5);
  CHECK(c.seed == 7);
  CHECK(c.features.main == MainFeature::PosOnly);
  CHECK_THROWS_AS(c.merge({{"nope", 1}}), ValidationError);
  CHECK_THROWS_AS(c.merge({{"k", "five"}}), ValidationError);
  CHECK(c.rules_path() == c.lexicons / "rules.tsv");
}
