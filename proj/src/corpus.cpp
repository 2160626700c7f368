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

#include "patrol/corpus.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "patrol/error.hpp"
#include "patrol/text.hpp"

namespace patrol {

std::string_view label_code(TriLabel l) {
  switch (l) {
    case TriLabel::Normal: return "N";
    case TriLabel::Doubtful: return "D";
    case TriLabel::Harmful: return "H";
  }
  return "N";
}

TriLabel parse_label(std::string_view code) {
  if (code == "N") return TriLabel::Normal;
  if (code == "D") return TriLabel::Doubtful;
  if (code == "H") return TriLabel::Harmful;
  throw ValidationError("invalid label '" + std::string(code) + "' (expected N, D or H)");
}

nlohmann::json to_json(const Entry& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["text"] = e.text;
  if (e.source) j["source"] = *e.source;
  if (e.timestamp) j["timestamp"] = *e.timestamp;
  if (e.gold_label) j["label"] = std::string(label_code(*e.gold_label));
  return j;
}

namespace {

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Entry entry_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("record must be an object");
  Entry e;
  const auto id = optional_string(j, "id");
  if (!id) throw ValidationError("missing field 'id'");
  const auto text = optional_string(j, "text");
  if (!text) throw ValidationError("missing field 'text'");
  e.id = *id;
  e.text = *text;
  if (e.id.empty()) throw ValidationError("empty id");
  if (trim(e.text).empty()) throw ValidationError("entry '" + e.id + "' has blank text");
  e.source = optional_string(j, "source");
  e.timestamp = optional_string(j, "timestamp");
  if (const auto label = optional_string(j, "label")) e.gold_label = parse_label(*label);
  return e;
}

Dataset::Dataset(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (e.id.empty()) throw ValidationError("empty id");
    if (trim(e.text).empty()) throw ValidationError("entry '" + e.id + "' has blank text");
    if (!seen.insert(e.id).second) throw ValidationError("duplicate id '" + e.id + "'");
    if (!e.gold_label) {
      ++counts_.unlabeled;
    } else {
      switch (*e.gold_label) {
        case TriLabel::Normal: ++counts_.normal; break;
        case TriLabel::Doubtful: ++counts_.doubtful; break;
        case TriLabel::Harmful: ++counts_.harmful; break;
      }
    }
  }
}

Dataset parse_dataset(std::string_view contents) {
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    const std::string_view line = trim(contents.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParseError(std::string("malformed record: ") + ex.what(), line_no);
    }
    Entry e;
    try {
      e = entry_from_json(j);
    } catch (const ValidationError& ex) {
      throw ParseError(ex.what(), line_no);
    }
    if (!seen.insert(e.id).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate id '" + e.id + "'");
    }
    entries.push_back(std::move(e));
  }
  return Dataset(std::move(entries));
}

Dataset load_dataset(const std::filesystem::path& path, CorpusFormat /*format*/) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  for (const auto& e : dataset.entries()) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write dataset '" + path.string() + "'");
  out << serialize_dataset(dataset);
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (const auto& [id, fold] : assignment) ++sizes[static_cast<std::size_t>(fold)];
  return sizes;
}

FoldPlan split_folds(const Dataset& dataset, int k, std::uint64_t seed, bool stratified) {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (static_cast<std::size_t>(k) > dataset.size()) {
    throw ValidationError("k=" + std::to_string(k) + " exceeds dataset size " +
                          std::to_string(dataset.size()));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> strata(stratified ? 3 : 1);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    std::size_t s = 0;
    if (stratified) {
      const auto& label = dataset[i].gold_label;
      s = !label ? 2 : (is_harmful(*label) ? 0 : 1);
    }
    strata[s].push_back(i);
  }
  FoldPlan plan;
  plan.k = k;
  // A single running counter across strata keeps global sizes within 1.
  std::size_t next = 0;
  for (auto& stratum : strata) {
    stable_shuffle(stratum, rng);
    for (std::size_t idx : stratum) {
      plan.assignment[dataset[idx].id] = static_cast<int>(next % static_cast<std::size_t>(k));
      ++next;
    }
  }
  return plan;
}

}  // namespace patrol
