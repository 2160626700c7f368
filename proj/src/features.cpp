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

#include "patrol/features.hpp"

#include <cmath>
#include <set>

#include "patrol/error.hpp"

namespace patrol {

std::string_view main_feature_name(MainFeature m) {
  switch (m) {
    case MainFeature::WordPos: return "wordpos";
    case MainFeature::WordOnly: return "word";
    case MainFeature::PosOnly: return "pos";
  }
  return "word";
}

std::string_view weighting_name(Weighting w) {
  switch (w) {
    case Weighting::Occurrence: return "occ";
    case Weighting::Relative: return "rel";
    case Weighting::Idf: return "idf";
    case Weighting::TfIdf: return "tfidf";
  }
  return "tfidf";
}

MainFeature parse_main_feature(std::string_view name) {
  for (auto m : {MainFeature::WordPos, MainFeature::WordOnly, MainFeature::PosOnly}) {
    if (main_feature_name(m) == name) return m;
  }
  throw ValidationError("unknown main feature '" + std::string(name) + "' (wordpos|word|pos)");
}

Weighting parse_weighting(std::string_view name) {
  for (auto w : {Weighting::Occurrence, Weighting::Relative, Weighting::Idf, Weighting::TfIdf}) {
    if (weighting_name(w) == name) return w;
  }
  throw ValidationError("unknown weighting '" + std::string(name) + "' (occ|rel|idf|tfidf)");
}

std::vector<FeatureConfig> FeatureConfig::grid() {
  std::vector<FeatureConfig> out;
  for (auto m : {MainFeature::WordPos, MainFeature::WordOnly, MainFeature::PosOnly}) {
    for (auto w : {Weighting::Occurrence, Weighting::Relative, Weighting::Idf, Weighting::TfIdf}) {
      FeatureConfig c;
      c.main = m;
      c.weighting = w;
      out.push_back(c);
    }
  }
  return out;
}

std::string FeatureConfig::name() const {
  return std::string(main_feature_name(main)) + "/" + std::string(weighting_name(weighting));
}

nlohmann::json to_json(const FeatureConfig& c) {
  return {{"main", main_feature_name(c.main)},
          {"weighting", weighting_name(c.weighting)},
          {"raw_tf", c.raw_tf},
          {"l2_normalize", c.l2_normalize}};
}

FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("feature config must be an object");
  FeatureConfig c;
  if (j.contains("main")) c.main = parse_main_feature(j.at("main").get<std::string>());
  if (j.contains("weighting")) c.weighting = parse_weighting(j.at("weighting").get<std::string>());
  if (j.contains("raw_tf")) c.raw_tf = j.at("raw_tf").get<bool>();
  if (j.contains("l2_normalize")) c.l2_normalize = j.at("l2_normalize").get<bool>();
  return c;
}

std::string feature_key(const Token& token, MainFeature main) {
  switch (main) {
    case MainFeature::WordPos: return token.key() + "\t" + std::string(pos_name(token.pos));
    case MainFeature::WordOnly: return token.key();
    case MainFeature::PosOnly: return std::string(pos_name(token.pos));
  }
  return token.key();
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::uint32_t i) const {
  return std::log(static_cast<double>(total_entries_) / static_cast<double>(doc_freq_[i]) + 1.0);
}

void Vocabulary::add(std::string key, std::uint64_t df, std::uint64_t cf) {
  const auto i = static_cast<std::uint32_t>(keys_.size());
  index_.emplace(key, i);
  keys_.push_back(std::move(key));
  doc_freq_.push_back(df);
  corpus_freq_.push_back(cf);
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < keys_.size(); ++i) rows.push_back({keys_[i], doc_freq_[i], corpus_freq_[i]});
  return {{"total_tokens", total_tokens_}, {"total_entries", total_entries_}, {"terms", rows}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  Vocabulary v;
  v.total_tokens_ = j.at("total_tokens").get<std::uint64_t>();
  v.total_entries_ = j.at("total_entries").get<std::uint64_t>();
  for (const auto& row : j.at("terms")) {
    auto key = row.at(0).get<std::string>();
    const auto df = row.at(1).get<std::uint64_t>();
    const auto cf = row.at(2).get<std::uint64_t>();
    if (df == 0 || df > v.total_entries_ || cf < df) throw ValidationError("vocabulary row '" + key + "' has inconsistent counts");
    if (v.index_.contains(key)) throw ValidationError("duplicate vocabulary key '" + key + "'");
    v.add(std::move(key), df, cf);
  }
  return v;
}

Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& entries, const FeatureConfig& config) {
  if (entries.empty()) throw ValidationError("cannot build a vocabulary from an empty dataset");
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> tally;  // key -> (df, cf)
  Vocabulary v;
  v.total_entries_ = entries.size();
  for (const auto& tokens : entries) {
    std::set<std::string> seen;
    for (const auto& t : tokens) {
      auto key = feature_key(t, config.main);
      ++tally[key].second;
      ++v.total_tokens_;
      if (seen.insert(key).second) ++tally[key].first;
    }
  }
  for (auto& [key, c] : tally) v.add(key, c.first, c.second);
  return v;
}

namespace {

double weight_for(std::uint32_t i, std::uint64_t tf, const Vocabulary& vocab, const FeatureConfig& config) {
  const double cf = static_cast<double>(vocab.corpus_freq(i));
  const double occ = config.raw_tf ? static_cast<double>(tf) : static_cast<double>(tf) / cf;
  switch (config.weighting) {
    case Weighting::Occurrence: return occ;
    case Weighting::Relative: return occ / cf;
    case Weighting::Idf: return tf > 0 ? vocab.idf(i) : 0.0;
    case Weighting::TfIdf: return occ * vocab.idf(i);
  }
  return 0.0;
}

}  // namespace

double weigh(std::string_view term, const std::vector<Token>& entry, const Vocabulary& vocab,
             const FeatureConfig& config) {
  const auto i = vocab.index_of(term);
  if (!i) throw ContractError("term '" + std::string(term) + "' is not in the vocabulary");
  std::uint64_t tf = 0;
  for (const auto& t : entry) tf += feature_key(t, config.main) == term;
  return weight_for(*i, tf, vocab, config);
}

double FeatureVector::dot(const std::vector<double>& dense) const {
  double s = 0.0;
  for (const auto& [i, w] : items) s += w * dense[i];
  return s;
}

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [i, w] : items) s += w * w;
  return s;
}

FeatureVector vectorize(const std::vector<Token>& entry, const Vocabulary& vocab, const FeatureConfig& config) {
  std::map<std::uint32_t, std::uint64_t> tf;
  for (const auto& t : entry) {
    if (auto i = vocab.index_of(feature_key(t, config.main))) ++tf[*i];
  }
  FeatureVector v;
  for (const auto& [i, n] : tf) {
    const double w = weight_for(i, n, vocab, config);
    if (w != 0.0) v.items.emplace_back(i, w);
  }
  if (config.l2_normalize && !v.items.empty()) {
    const double norm = std::sqrt(v.squared_norm());
    for (auto& item : v.items) item.second /= norm;
  }
  return v;
}

}  // namespace patrol
