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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patrol/classifier.hpp"
#include "patrol/corpus.hpp"
#include "patrol/pipeline.hpp"

namespace patrol {

enum class DedupMode { Raw, DedupPerEntry, DedupPlusSimilarity };
std::string_view dedup_mode_name(DedupMode m);  // raw | dedup | similarity
DedupMode parse_dedup_mode(std::string_view name);

// Unordered word pair, stored with first <= second.
using WordPair = std::pair<std::string, std::string>;
WordPair make_pair_key(std::string a, std::string b);

// The vulgar words of one entry under a mode, word -> occurrences. Raw and
// DedupPerEntry key on the lowercased surface of lexicon hits (canonicals or
// listed variants); DedupPlusSimilarity keys on the resolved canonical.
std::map<std::string, std::uint64_t> entry_vulgar_words(const std::vector<Token>& tokens, const Pipeline& pipeline,
                                                        DedupMode mode);

// Entry-level co-occurrence statistics. Under Raw a pair of distinct words
// counts min(cntA, cntB) per entry and a self-pair counts cnt when cnt >= 2;
// word counts are total occurrences. Under the dedup modes every pair
// present in an entry (self-pairs included) counts once and word counts are
// entry frequencies. N is the total token count of the corpus.
class CooccurrenceTable {
 public:
  explicit CooccurrenceTable(DedupMode mode = DedupMode::DedupPlusSimilarity) : mode_(mode) {}

  void add_entry(const std::map<std::string, std::uint64_t>& vulgar_words, std::uint64_t token_count);

  DedupMode mode() const { return mode_; }
  std::uint64_t total_words() const { return n_; }
  std::uint64_t word_count(std::string_view w) const;
  std::uint64_t pair_count(const std::string& a, const std::string& b) const;
  const std::map<std::string, std::uint64_t, std::less<>>& words() const { return words_; }
  const std::map<WordPair, std::uint64_t>& pairs() const { return pairs_; }

  // Builds a table from raw counts (tests, fixtures).
  static CooccurrenceTable from_counts(DedupMode mode, std::uint64_t n,
                                       std::map<std::string, std::uint64_t, std::less<>> words,
                                       std::map<WordPair, std::uint64_t> pairs);

 private:
  DedupMode mode_;
  std::uint64_t n_ = 0;
  std::map<std::string, std::uint64_t, std::less<>> words_;
  std::map<WordPair, std::uint64_t> pairs_;
};

CooccurrenceTable build_cooccurrence(const Dataset& dataset, const Pipeline& pipeline, DedupMode mode);
CooccurrenceTable build_cooccurrence(const std::vector<std::vector<Token>>& entries, const Pipeline& pipeline,
                                     DedupMode mode);

// (c - occA * occB / N) / sqrt(c). Throws DomainError when c = 0 or N = 0.
double t_score(std::uint64_t c, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t n);
double t_score(const WordPair& pair, const CooccurrenceTable& table);

struct Contribution {
  WordPair pair;
  double t_score = 0.0;
};

struct HarmfulnessReport {
  std::string entry_id;
  double total = 0.0;
  std::vector<Contribution> contributions;
  std::vector<LabeledSpan> spans;
};

// Sum of T-scores of the vulgar pairs present in the text, each pair once.
HarmfulnessReport score_entry(std::string_view id, const std::vector<Token>& tokens, const CooccurrenceTable& table,
                              const Pipeline& pipeline);

// Descending total, ties by entry id. Spans are filled by highlight().
std::vector<HarmfulnessReport> rank_entries(const Dataset& dataset, const CooccurrenceTable& table,
                                            const Pipeline& pipeline);

// Vulgarity (lookup or normalized), rule trigger, expression and emoteme
// spans, merged so none overlap. On overlap the higher kind wins the shared
// bytes: vulgarity > rule > expression > emoteme.
std::vector<LabeledSpan> highlight(std::string_view text, const std::vector<Token>& tokens,
                                   const Pipeline& pipeline, const std::vector<RuleTrigger>& rules = {});
std::vector<LabeledSpan> highlight(const Entry& entry, const Pipeline& pipeline);

// Resolves overlaps between labeled spans by kind priority.
std::vector<LabeledSpan> merge_spans(std::vector<LabeledSpan> spans);

nlohmann::json to_json(const HarmfulnessReport& r);
nlohmann::json to_json(const LabeledSpan& s);

}  // namespace patrol
