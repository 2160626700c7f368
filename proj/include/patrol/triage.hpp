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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/classifier.hpp"
#include "patrol/corpus.hpp"
#include "patrol/evalkit.hpp"
#include "patrol/pipeline.hpp"
#include "patrol/ranker.hpp"

namespace patrol {

enum class ItemStatus { Pending, Decided };
std::string_view status_name(ItemStatus s);  // pending | decided
ItemStatus parse_status(std::string_view name);

struct Decision {
  TriLabel label = TriLabel::Normal;
  std::string reviewer;
  std::string decided_at;
};

struct MachineResult {
  double svm_score = 0.0;
  bool svm_harmful = false;
  RuleScreenResult rules;
  TriLabel final = TriLabel::Normal;
  double total = 0.0;  // harmfulness
  std::vector<LabeledSpan> spans;
  int model_version = 0;
  std::string scored_at;
};

nlohmann::json to_json(const MachineResult& m);
MachineResult machine_from_json(const nlohmann::json& j);

struct QueueItem {
  Entry entry;
  MachineResult machine;
  ItemStatus status = ItemStatus::Pending;
  std::optional<Decision> decision;  // latest; present iff Decided
  std::uint64_t decision_count = 0;
};

nlohmann::json to_json(const QueueItem& item);

// State derived from the event log. apply() is the only way it changes, for
// live appends and replay alike.
struct Snapshot {
  std::map<std::string, QueueItem> items;
  int model_version = 0;
  std::uint64_t decisions_since_retrain = 0;
  std::uint64_t last_seq = 0;

  // Throws ValidationError on an event it cannot apply.
  void apply(const nlohmann::json& event);
  nlohmann::json to_json() const;
  // Deterministic serialization; equal state gives equal bytes.
  std::string dump() const { return to_json().dump(); }
};

// Append-only JSONL event log plus the snapshot it implies. Without a path
// the log lives in memory only.
class EventStore {
 public:
  explicit EventStore(std::optional<std::filesystem::path> log_path = std::nullopt);

  // Reads an existing log (if any) and replays it.
  static EventStore open(const std::filesystem::path& log_path);
  static Snapshot replay(const std::vector<nlohmann::json>& events);
  static std::vector<nlohmann::json> read_log(const std::filesystem::path& log_path);

  // Stamps the next sequence number, persists the line, then applies the
  // event as read back from its serialized form.
  const nlohmann::json& append(nlohmann::json event);

  const Snapshot& snapshot() const { return snapshot_; }
  const std::vector<nlohmann::json>& events() const { return events_; }
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  std::vector<nlohmann::json> events_;
  Snapshot snapshot_;
};

struct QueueFilter {
  std::optional<ItemStatus> status;
  std::optional<TriLabel> label;  // machine final label
  std::size_t page = 0;
  std::size_t page_size = 20;
};

struct QueuePage {
  std::vector<QueueItem> items;
  std::size_t total = 0;  // items matching the filter
  std::size_t page = 0;
  std::size_t page_size = 0;
};

// Harmfulness descending, then final label severity, then id.
bool queue_before(const QueueItem& a, const QueueItem& b);
QueuePage query_queue(const Snapshot& snapshot, const QueueFilter& filter);

// Returns an ISO-8601 UTC timestamp.
using Clock = std::function<std::string()>;
std::string system_clock_now();

struct ServiceConfig {
  // Holds events.jsonl, snapshot.json and models/v{n}.json. Empty means
  // in-memory only.
  std::filesystem::path data_dir;
  FeatureConfig features;
  SvmHyper hyper;
  FusionMatrix fusion = FusionMatrix::standard();
  DedupMode dedup = DedupMode::DedupPlusSimilarity;
  bool doubtful_is_harmful = true;
  std::size_t page_size = 20;
};

struct ModelInfo {
  int version = 0;
  std::string trained_at;
  std::size_t training_size = 0;
  std::uint64_t decisions_used = 0;
  Metrics training_metrics;
  FeatureConfig features;
  SvmHyper hyper;
  TrainingMeta meta;
  std::size_t vocabulary_size = 0;
};

nlohmann::json to_json(const ModelInfo& m);
ModelInfo model_info_from_json(const nlohmann::json& j);

// The live triage queue. Reads share a lock; ingest, decide and retrain take
// it exclusively, so log appends are serialized and a retrain swaps the
// model without interleaving with writes.
class TriageService {
 public:
  // Replays an existing log in data_dir, or trains version 1 on the base
  // corpus (or adopts `initial_model`) when starting fresh.
  TriageService(std::shared_ptr<const Pipeline> pipeline, RulePatternSet rules, Dataset base_corpus,
                ServiceConfig config, Clock clock = system_clock_now,
                std::optional<SvmModel> initial_model = std::nullopt);

  // All-or-nothing: a duplicate id raises ConflictError, a malformed entry
  // ValidationError, and nothing is ingested.
  std::vector<std::string> ingest(const std::vector<Entry>& entries);
  QueuePage queue(const QueueFilter& filter) const;
  QueueItem item(const std::string& id) const;  // NotFoundError
  QueueItem decide(const std::string& id, TriLabel label, const std::string& reviewer);
  // PreconditionError unless at least max(1, min_new_decisions) decisions
  // arrived since the last retrain.
  ModelInfo retrain(std::uint64_t min_new_decisions);
  ModelInfo model_info() const;
  // One record per decided item (latest decision), sorted by id.
  std::string export_decisions() const;

  std::string snapshot_dump() const;
  std::vector<nlohmann::json> events() const;
  std::size_t size() const;
  const ServiceConfig& config() const { return config_; }

 private:
  MachineResult score_locked(const Entry& entry, const std::vector<Token>& tokens) const;
  void append_score_locked(const Entry& entry);
  ModelInfo train_locked(int version, std::uint64_t decisions_used);
  void write_snapshot_locked() const;
  std::filesystem::path model_path(int version) const;

  std::shared_ptr<const Pipeline> pipeline_;
  RulePatternSet rules_;
  Dataset base_;
  ServiceConfig config_;
  Clock clock_;

  mutable std::shared_mutex mutex_;
  EventStore store_;
  std::shared_ptr<const SvmModel> model_;
  ModelInfo info_;
  CooccurrenceTable table_;
};

}  // namespace patrol
