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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace patrol {

enum class TriLabel { Normal, Doubtful, Harmful };

// Severity order N < D < H.
inline int severity(TriLabel l) { return static_cast<int>(l); }
inline TriLabel max_severity(TriLabel a, TriLabel b) { return severity(a) >= severity(b) ? a : b; }

std::string_view label_code(TriLabel l);  // "N" | "D" | "H"
TriLabel parse_label(std::string_view code);

// Binary projection used for SVM training. Doubtful counts as harmful unless
// the caller opts out.
inline bool is_harmful(TriLabel l, bool doubtful_is_harmful = true) {
  return l == TriLabel::Harmful || (doubtful_is_harmful && l == TriLabel::Doubtful);
}

struct Entry {
  std::string id;
  std::string text;
  std::optional<std::string> source;
  std::optional<std::string> timestamp;
  std::optional<TriLabel> gold_label;

  friend bool operator==(const Entry&, const Entry&) = default;
};

nlohmann::json to_json(const Entry& e);
// Throws ValidationError on missing/ill-typed fields or blank text.
Entry entry_from_json(const nlohmann::json& j);

struct LabelCounts {
  std::size_t normal = 0;
  std::size_t doubtful = 0;
  std::size_t harmful = 0;
  std::size_t unlabeled = 0;

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  // Validates ids (unique, non-empty) and texts; throws ValidationError.
  explicit Dataset(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  const LabelCounts& counts() const { return counts_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Entry> entries_;
  LabelCounts counts_;
};

enum class CorpusFormat { Jsonl };

// Line-delimited records. Blank lines are skipped; a malformed line raises
// ParseError carrying its 1-based line number.
Dataset load_dataset(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::Jsonl);
Dataset parse_dataset(std::string_view contents);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string serialize_dataset(const Dataset& dataset);

struct FoldPlan {
  int k = 0;
  std::map<std::string, int> assignment;

  std::vector<std::size_t> fold_sizes() const;
  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Deterministic for a fixed seed. With `stratified`, entries are grouped by
// binary label (harmful / non-harmful / unlabeled) before the round-robin so
// every fold gets a near-equal harmful ratio. Fold sizes differ by at most 1.
FoldPlan split_folds(const Dataset& dataset, int k, std::uint64_t seed, bool stratified = true);

// Deterministic Fisher-Yates on a 64-bit Mersenne twister; std::shuffle is
// not portable across standard libraries.
template <typename T, typename Rng>
void stable_shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace patrol
