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

#include "patrol/triage.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>
#include <set>

#include "patrol/error.hpp"
#include "patrol/io.hpp"

namespace patrol {

using nlohmann::json;

std::string_view status_name(ItemStatus s) { return s == ItemStatus::Pending ? "pending" : "decided"; }

ItemStatus parse_status(std::string_view name) {
  if (name == "pending") return ItemStatus::Pending;
  if (name == "decided") return ItemStatus::Decided;
  throw ValidationError("unknown status '" + std::string(name) + "' (pending|decided)");
}

namespace {

json triggers_to_json(const std::vector<RuleTrigger>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back({{"rule_id", t.rule_id}, {"start", t.span.start}, {"end", t.span.end}});
  return out;
}

}  // namespace

json to_json(const MachineResult& m) {
  json spans = json::array();
  for (const auto& s : m.spans) spans.push_back(to_json(s));
  return {{"svm_score", m.svm_score},
          {"svm_harmful", m.svm_harmful},
          {"rules", {{"label", label_code(m.rules.label)}, {"triggers", triggers_to_json(m.rules.triggers)}}},
          {"final", label_code(m.final)},
          {"total", m.total},
          {"spans", spans},
          {"model_version", m.model_version},
          {"scored_at", m.scored_at}};
}

MachineResult machine_from_json(const json& j) {
  MachineResult m;
  m.svm_score = j.at("svm_score").get<double>();
  m.svm_harmful = j.at("svm_harmful").get<bool>();
  m.rules.label = parse_label(j.at("rules").at("label").get<std::string>());
  for (const auto& t : j.at("rules").at("triggers")) {
    m.rules.triggers.push_back(
        {t.at("rule_id").get<std::string>(), {t.at("start").get<std::size_t>(), t.at("end").get<std::size_t>()}});
  }
  m.final = parse_label(j.at("final").get<std::string>());
  m.total = j.at("total").get<double>();
  for (const auto& s : j.at("spans")) {
    m.spans.push_back({{s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>()},
                       s.at("kind").get<std::string>(),
                       s.at("value").get<std::string>()});
  }
  m.model_version = j.at("model_version").get<int>();
  m.scored_at = j.at("scored_at").get<std::string>();
  return m;
}

json to_json(const QueueItem& item) {
  json j = to_json(item.entry);
  j["status"] = status_name(item.status);
  j["machine"] = to_json(item.machine);
  j["decision_count"] = item.decision_count;
  if (item.decision) {
    j["decision"] = {{"label", label_code(item.decision->label)},
                     {"reviewer", item.decision->reviewer},
                     {"decided_at", item.decision->decided_at}};
  } else {
    j["decision"] = nullptr;
  }
  return j;
}

void Snapshot::apply(const json& event) {
  try {
    const auto seq = event.at("seq").get<std::uint64_t>();
    if (seq != last_seq + 1) {
      throw ValidationError("event sequence gap: expected " + std::to_string(last_seq + 1) + ", got " +
                            std::to_string(seq));
    }
    const auto type = event.at("type").get<std::string>();
    if (type == "ingest") {
      Entry e = entry_from_json(event.at("entry"));
      if (items.contains(e.id)) throw ValidationError("event " + std::to_string(seq) + " re-ingests '" + e.id + "'");
      QueueItem item;
      item.entry = std::move(e);
      const std::string id = item.entry.id;
      items.emplace(id, std::move(item));
    } else if (type == "score") {
      auto it = items.find(event.at("id").get<std::string>());
      if (it == items.end()) throw ValidationError("event " + std::to_string(seq) + " scores an unknown id");
      it->second.machine = machine_from_json(event.at("machine"));
    } else if (type == "decision") {
      auto it = items.find(event.at("id").get<std::string>());
      if (it == items.end()) throw ValidationError("event " + std::to_string(seq) + " decides an unknown id");
      it->second.decision = Decision{parse_label(event.at("label").get<std::string>()),
                                     event.at("reviewer").get<std::string>(), event.at("at").get<std::string>()};
      it->second.status = ItemStatus::Decided;
      ++it->second.decision_count;
      ++decisions_since_retrain;
    } else if (type == "retrain") {
      model_version = event.at("model").at("version").get<int>();
      decisions_since_retrain = 0;
    } else {
      throw ValidationError("unknown event type '" + type + "'");
    }
    last_seq = seq;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("malformed event: ") + ex.what());
  }
}

json Snapshot::to_json() const {
  json list = json::array();
  for (const auto& [id, item] : items) list.push_back(patrol::to_json(item));
  return {{"model_version", model_version},
          {"decisions_since_retrain", decisions_since_retrain},
          {"last_seq", last_seq},
          {"items", list}};
}

EventStore::EventStore(std::optional<std::filesystem::path> log_path) : path_(std::move(log_path)) {}

std::vector<json> EventStore::read_log(const std::filesystem::path& log_path) {
  std::vector<json> out;
  if (!std::filesystem::exists(log_path)) return out;
  const std::string text = read_file(log_path, "event log");
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& ex) {
      throw ParseError(std::string("event log: ") + ex.what(), line_no);
    }
  }
  return out;
}

Snapshot EventStore::replay(const std::vector<json>& events) {
  Snapshot s;
  for (const auto& e : events) s.apply(e);
  return s;
}

EventStore EventStore::open(const std::filesystem::path& log_path) {
  EventStore store(log_path);
  store.events_ = read_log(log_path);
  store.snapshot_ = replay(store.events_);
  return store;
}

const json& EventStore::append(json event) {
  event["seq"] = snapshot_.last_seq + 1;
  const std::string line = event.dump();
  json parsed = json::parse(line);
  Snapshot next = snapshot_;
  next.apply(parsed);
  if (path_) append_line(*path_, line);
  snapshot_ = std::move(next);
  events_.push_back(std::move(parsed));
  return events_.back();
}

bool queue_before(const QueueItem& a, const QueueItem& b) {
  if (a.machine.total != b.machine.total) return a.machine.total > b.machine.total;
  if (a.machine.final != b.machine.final) return severity(a.machine.final) > severity(b.machine.final);
  return a.entry.id < b.entry.id;
}

QueuePage query_queue(const Snapshot& snapshot, const QueueFilter& filter) {
  if (filter.page_size == 0) throw ValidationError("page_size must be positive");
  std::vector<const QueueItem*> hits;
  for (const auto& [id, item] : snapshot.items) {
    if (filter.status && item.status != *filter.status) continue;
    if (filter.label && item.machine.final != *filter.label) continue;
    hits.push_back(&item);
  }
  std::sort(hits.begin(), hits.end(), [](const QueueItem* a, const QueueItem* b) { return queue_before(*a, *b); });
  QueuePage page;
  page.total = hits.size();
  page.page = filter.page;
  page.page_size = filter.page_size;
  const std::size_t from = std::min(hits.size(), filter.page * filter.page_size);
  const std::size_t to = std::min(hits.size(), from + filter.page_size);
  for (std::size_t i = from; i < to; ++i) page.items.push_back(*hits[i]);
  return page;
}

std::string system_clock_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const ModelInfo& m) {
  return {{"version", m.version},
          {"trained_at", m.trained_at},
          {"training_size", m.training_size},
          {"decisions_used", m.decisions_used},
          {"training_metrics", to_json(m.training_metrics)},
          {"features", to_json(m.features)},
          {"hyper",
           {{"C", m.hyper.C},
            {"tolerance", m.hyper.tolerance},
            {"max_epochs", m.hyper.max_epochs},
            {"bias_term", m.hyper.bias_term},
            {"seed", m.hyper.seed}}},
          {"objective", m.meta.objective},
          {"epochs", m.meta.epochs},
          {"converged", m.meta.converged},
          {"vocabulary_size", m.vocabulary_size}};
}

ModelInfo model_info_from_json(const json& j) {
  ModelInfo m;
  m.version = j.at("version").get<int>();
  m.trained_at = j.at("trained_at").get<std::string>();
  m.training_size = j.at("training_size").get<std::size_t>();
  m.decisions_used = j.at("decisions_used").get<std::uint64_t>();
  const auto& tm = j.at("training_metrics");
  m.training_metrics = metrics_from_counts(tm.at("s").get<std::uint64_t>(), tm.at("n").get<std::uint64_t>(),
                                           tm.at("c").get<std::uint64_t>());
  m.features = feature_config_from_json(j.at("features"));
  const auto& h = j.at("hyper");
  m.hyper.C = h.at("C").get<double>();
  m.hyper.tolerance = h.at("tolerance").get<double>();
  m.hyper.max_epochs = h.at("max_epochs").get<int>();
  m.hyper.bias_term = h.at("bias_term").get<double>();
  m.hyper.seed = h.at("seed").get<std::uint64_t>();
  m.meta.objective = j.at("objective").get<double>();
  m.meta.epochs = j.at("epochs").get<int>();
  m.meta.converged = j.at("converged").get<bool>();
  m.vocabulary_size = j.at("vocabulary_size").get<std::size_t>();
  return m;
}

TriageService::TriageService(std::shared_ptr<const Pipeline> pipeline, RulePatternSet rules, Dataset base_corpus,
                             ServiceConfig config, Clock clock, std::optional<SvmModel> initial_model)
    : pipeline_(std::move(pipeline)),
      rules_(std::move(rules)),
      base_(std::move(base_corpus)),
      config_(std::move(config)),
      clock_(std::move(clock)),
      table_(config_.dedup) {
  if (!pipeline_) throw ContractError("service needs a pipeline");
  if (config_.page_size == 0) throw ValidationError("page_size must be positive");
  std::unique_lock lock(mutex_);
  for (const auto& e : base_.entries()) {
    const auto tokens = pipeline_->tokenize(e.text);
    table_.add_entry(entry_vulgar_words(tokens, *pipeline_, config_.dedup), tokens.size());
  }
  if (!config_.data_dir.empty()) {
    std::filesystem::create_directories(config_.data_dir / "models");
    store_ = EventStore::open(config_.data_dir / "events.jsonl");
  }
  if (store_.snapshot().model_version == 0) {
    if (initial_model) {
      model_ = std::make_shared<const SvmModel>(std::move(*initial_model));
      info_.version = 1;
      info_.trained_at = clock_();
      info_.features = model_->features;
      info_.hyper = model_->svm.hyper;
      info_.meta = model_->svm.meta;
      info_.vocabulary_size = model_->vocab.size();
      if (!config_.data_dir.empty()) save_model(*model_, model_path(1));
      store_.append({{"type", "retrain"}, {"at", info_.trained_at}, {"model", to_json(info_)}});
    } else {
      train_locked(1, 0);
    }
    write_snapshot_locked();
    return;
  }
  // Resuming: rebuild the model pointer, the model info and the table.
  const int version = store_.snapshot().model_version;
  for (const auto& e : store_.events()) {
    if (e.at("type") == "retrain") info_ = model_info_from_json(e.at("model"));
    if (e.at("type") == "ingest") {
      const Entry entry = entry_from_json(e.at("entry"));
      const auto tokens = pipeline_->tokenize(entry.text);
      table_.add_entry(entry_vulgar_words(tokens, *pipeline_, config_.dedup), tokens.size());
    }
  }
  model_ = std::make_shared<const SvmModel>(load_model(model_path(version)));
}

std::filesystem::path TriageService::model_path(int version) const {
  return config_.data_dir / "models" / ("v" + std::to_string(version) + ".json");
}

void TriageService::write_snapshot_locked() const {
  if (config_.data_dir.empty()) return;
  write_file_atomic(config_.data_dir / "snapshot.json", store_.snapshot().dump() + "\n");
}

MachineResult TriageService::score_locked(const Entry& entry, const std::vector<Token>& tokens) const {
  MachineResult m;
  const Classification c = classify_tokens(entry.text, tokens, *model_, rules_, *pipeline_, config_.fusion);
  m.svm_score = c.svm.score;
  m.svm_harmful = c.svm.harmful;
  m.rules = c.rules;
  m.final = c.final;
  m.total = score_entry(entry.id, tokens, table_, *pipeline_).total;
  m.spans = highlight(entry.text, tokens, *pipeline_, c.rules.triggers);
  m.model_version = info_.version;
  m.scored_at = clock_();
  return m;
}

void TriageService::append_score_locked(const Entry& entry) {
  const auto tokens = pipeline_->tokenize(entry.text);
  const MachineResult m = score_locked(entry, tokens);
  store_.append({{"type", "score"}, {"at", m.scored_at}, {"id", entry.id}, {"machine", to_json(m)}});
}

ModelInfo TriageService::train_locked(int version, std::uint64_t decisions_used) {
  std::map<std::string, TriLabel> labels;
  std::map<std::string, const Entry*> texts;
  for (const auto& e : base_.entries()) {
    if (e.gold_label) {
      labels[e.id] = *e.gold_label;
      texts[e.id] = &e;
    }
  }
  for (const auto& [id, item] : store_.snapshot().items) {
    if (!item.decision) continue;
    labels[id] = item.decision->label;
    texts[id] = &item.entry;
  }
  std::vector<std::vector<Token>> docs;
  std::vector<bool> ys;
  for (const auto& [id, label] : labels) {
    docs.push_back(pipeline_->tokenize(texts.at(id)->text));
    ys.push_back(is_harmful(label, config_.doubtful_is_harmful));
  }
  if (docs.empty()) throw PreconditionError("no labeled data to train on");
  auto model = std::make_shared<SvmModel>(train_svm(docs, ys, config_.features, config_.hyper));
  model->doubtful_is_harmful = config_.doubtful_is_harmful;

  std::vector<bool> predicted;
  for (const auto& d : docs) predicted.push_back(predict(*model, d).harmful);

  ModelInfo info;
  info.version = version;
  info.trained_at = clock_();
  info.training_size = docs.size();
  info.decisions_used = decisions_used;
  info.training_metrics = score(predicted, ys);
  info.features = config_.features;
  info.hyper = config_.hyper;
  info.meta = model->svm.meta;
  info.vocabulary_size = model->vocab.size();

  if (!config_.data_dir.empty()) save_model(*model, model_path(version));
  store_.append({{"type", "retrain"}, {"at", info.trained_at}, {"model", to_json(info)}});
  model_ = std::move(model);
  info_ = info;
  return info;
}

std::vector<std::string> TriageService::ingest(const std::vector<Entry>& entries) {
  std::unique_lock lock(mutex_);
  std::set<std::string> batch;
  for (const auto& e : entries) {
    entry_from_json(to_json(e));
    if (store_.snapshot().items.contains(e.id) || !batch.insert(e.id).second) {
      throw ConflictError("entry '" + e.id + "' already exists");
    }
  }
  std::vector<std::string> ids;
  for (const auto& e : entries) {
    store_.append({{"type", "ingest"}, {"at", clock_()}, {"entry", to_json(e)}});
    const auto tokens = pipeline_->tokenize(e.text);
    table_.add_entry(entry_vulgar_words(tokens, *pipeline_, config_.dedup), tokens.size());
    append_score_locked(e);
    ids.push_back(e.id);
  }
  return ids;
}

QueuePage TriageService::queue(const QueueFilter& filter) const {
  std::shared_lock lock(mutex_);
  return query_queue(store_.snapshot(), filter);
}

QueueItem TriageService::item(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = store_.snapshot().items.find(id);
  if (it == store_.snapshot().items.end()) throw NotFoundError("no entry '" + id + "'");
  return it->second;
}

QueueItem TriageService::decide(const std::string& id, TriLabel label, const std::string& reviewer) {
  std::unique_lock lock(mutex_);
  if (!store_.snapshot().items.contains(id)) throw NotFoundError("no entry '" + id + "'");
  if (trim(reviewer).empty()) throw ValidationError("reviewer must be non-empty");
  store_.append({{"type", "decision"},
                 {"at", clock_()},
                 {"id", id},
                 {"label", label_code(label)},
                 {"reviewer", std::string(trim(reviewer))}});
  return store_.snapshot().items.at(id);
}

ModelInfo TriageService::retrain(std::uint64_t min_new_decisions) {
  std::unique_lock lock(mutex_);
  const std::uint64_t have = store_.snapshot().decisions_since_retrain;
  const std::uint64_t need = std::max<std::uint64_t>(1, min_new_decisions);
  if (have < need) {
    throw PreconditionError("retrain needs " + std::to_string(need) + " new decisions, have " +
                            std::to_string(have));
  }
  ModelInfo info = train_locked(info_.version + 1, have);
  std::vector<Entry> pending;
  for (const auto& [id, item] : store_.snapshot().items) {
    if (item.status == ItemStatus::Pending) pending.push_back(item.entry);
  }
  for (const auto& e : pending) append_score_locked(e);
  write_snapshot_locked();
  return info;
}

ModelInfo TriageService::model_info() const {
  std::shared_lock lock(mutex_);
  return info_;
}

std::string TriageService::export_decisions() const {
  std::shared_lock lock(mutex_);
  std::string out;
  for (const auto& [id, item] : store_.snapshot().items) {
    if (!item.decision) continue;
    json j = {{"id", id},
              {"label", label_code(item.decision->label)},
              {"reviewer", item.decision->reviewer},
              {"decided_at", item.decision->decided_at},
              {"machine_label", label_code(item.machine.final)},
              {"total", item.machine.total},
              {"text", item.entry.text}};
    if (item.entry.source) j["source"] = *item.entry.source;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string TriageService::snapshot_dump() const {
  std::shared_lock lock(mutex_);
  return store_.snapshot().dump();
}

std::vector<json> TriageService::events() const {
  std::shared_lock lock(mutex_);
  return store_.events();
}

std::size_t TriageService::size() const {
  std::shared_lock lock(mutex_);
  return store_.snapshot().items.size();
}

}  // namespace patrol
