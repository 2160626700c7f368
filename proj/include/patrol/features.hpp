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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "patrol/tokenizer.hpp"

namespace patrol {

enum class MainFeature { WordPos, WordOnly, PosOnly };
enum class Weighting { Occurrence, Relative, Idf, TfIdf };

// CLI spellings: wordpos|word|pos and occ|rel|idf|tfidf.
std::string_view main_feature_name(MainFeature m);
std::string_view weighting_name(Weighting w);
MainFeature parse_main_feature(std::string_view name);
Weighting parse_weighting(std::string_view name);

struct FeatureConfig {
  MainFeature main = MainFeature::WordOnly;
  Weighting weighting = Weighting::TfIdf;
  // Plain in-document count instead of the in-document / corpus-wide ratio.
  bool raw_tf = false;
  // Scale each vector to unit length after weighting.
  bool l2_normalize = true;

  // The 3 x 4 main-feature x weighting grid, WordPos/Occurrence first.
  static std::vector<FeatureConfig> grid();
  std::string name() const;  // "word/tfidf"

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

nlohmann::json to_json(const FeatureConfig& c);
FeatureConfig feature_config_from_json(const nlohmann::json& j);

// The key a token contributes: "surface\tpos" (WordPos), the lowercased
// surface (WordOnly) or the POS name (PosOnly).
std::string feature_key(const Token& token, MainFeature main);

class Vocabulary {
 public:
  std::optional<std::uint32_t> index_of(std::string_view key) const;
  std::size_t size() const { return keys_.size(); }
  const std::string& key(std::uint32_t i) const { return keys_[i]; }
  std::uint64_t doc_freq(std::uint32_t i) const { return doc_freq_[i]; }
  std::uint64_t corpus_freq(std::uint32_t i) const { return corpus_freq_[i]; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::uint64_t total_entries() const { return total_entries_; }

  // Natural-log idf of index i: ln(entries / doc_freq + 1).
  double idf(std::uint32_t i) const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  friend Vocabulary build_vocabulary(const std::vector<std::vector<Token>>&, const FeatureConfig&);
  void add(std::string key, std::uint64_t df, std::uint64_t cf);

  std::vector<std::string> keys_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::vector<std::uint64_t> doc_freq_;
  std::vector<std::uint64_t> corpus_freq_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t total_entries_ = 0;
};

// Keys are ordered lexicographically, so the index layout depends only on the
// multiset of training documents. Throws ValidationError on an empty corpus.
Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& entries, const FeatureConfig& config);

// Weight of one term in one entry. Throws ContractError when the term is not
// in the vocabulary.
double weigh(std::string_view term, const std::vector<Token>& entry, const Vocabulary& vocab,
             const FeatureConfig& config);

// Sparse vector, sorted by index, zero weights dropped.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> items;

  double dot(const std::vector<double>& dense) const;
  double squared_norm() const;
  bool empty() const { return items.empty(); }
};

// Keys outside the vocabulary are dropped.
FeatureVector vectorize(const std::vector<Token>& entry, const Vocabulary& vocab, const FeatureConfig& config);

}  // namespace patrol
