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

#include "patrol/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "patrol/error.hpp"

namespace patrol {

std::string_view dedup_mode_name(DedupMode m) {
  switch (m) {
    case DedupMode::Raw: return "raw";
    case DedupMode::DedupPerEntry: return "dedup";
    case DedupMode::DedupPlusSimilarity: return "similarity";
  }
  return "similarity";
}

DedupMode parse_dedup_mode(std::string_view name) {
  for (auto m : {DedupMode::Raw, DedupMode::DedupPerEntry, DedupMode::DedupPlusSimilarity}) {
    if (dedup_mode_name(m) == name) return m;
  }
  throw ValidationError("unknown dedup mode '" + std::string(name) + "' (raw|dedup|similarity)");
}

WordPair make_pair_key(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::map<std::string, std::uint64_t> entry_vulgar_words(const std::vector<Token>& tokens, const Pipeline& pipeline,
                                                        DedupMode mode) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& t : tokens) {
    if (mode == DedupMode::DedupPlusSimilarity) {
      if (auto m = pipeline.resolve(t)) ++out[m->canonical];
      continue;
    }
    const std::string key = t.key();
    if (pipeline.bundle().vulgarity_for_surface(key) ||
        pipeline.bundle().vulgarity_for_surface(pipeline.analyzer().roman().romanize(t.surface))) {
      ++out[key];
    }
  }
  return out;
}

void CooccurrenceTable::add_entry(const std::map<std::string, std::uint64_t>& vulgar_words,
                                  std::uint64_t token_count) {
  n_ += token_count;
  const bool raw = mode_ == DedupMode::Raw;
  for (auto a = vulgar_words.begin(); a != vulgar_words.end(); ++a) {
    if (a->second == 0) continue;
    words_[a->first] += raw ? a->second : 1;
    if (!raw) ++pairs_[{a->first, a->first}];
    else if (a->second >= 2) pairs_[{a->first, a->first}] += a->second;
    for (auto b = std::next(a); b != vulgar_words.end(); ++b) {
      if (b->second == 0) continue;
      pairs_[{a->first, b->first}] += raw ? std::min(a->second, b->second) : 1;
    }
  }
}

std::uint64_t CooccurrenceTable::word_count(std::string_view w) const {
  auto it = words_.find(w);
  return it == words_.end() ? 0 : it->second;
}

std::uint64_t CooccurrenceTable::pair_count(const std::string& a, const std::string& b) const {
  auto it = pairs_.find(make_pair_key(a, b));
  return it == pairs_.end() ? 0 : it->second;
}

CooccurrenceTable CooccurrenceTable::from_counts(DedupMode mode, std::uint64_t n,
                                                 std::map<std::string, std::uint64_t, std::less<>> words,
                                                 std::map<WordPair, std::uint64_t> pairs) {
  CooccurrenceTable t(mode);
  t.n_ = n;
  t.words_ = std::move(words);
  for (auto& [p, c] : pairs) t.pairs_[make_pair_key(p.first, p.second)] += c;
  return t;
}

CooccurrenceTable build_cooccurrence(const std::vector<std::vector<Token>>& entries, const Pipeline& pipeline,
                                     DedupMode mode) {
  if (pipeline.bundle().vulgarities().empty()) throw PreconditionError("the vulgarity lexicon is empty");
  CooccurrenceTable table(mode);
  for (const auto& tokens : entries) table.add_entry(entry_vulgar_words(tokens, pipeline, mode), tokens.size());
  return table;
}

CooccurrenceTable build_cooccurrence(const Dataset& dataset, const Pipeline& pipeline, DedupMode mode) {
  std::vector<std::vector<Token>> entries;
  entries.reserve(dataset.size());
  for (const auto& e : dataset.entries()) entries.push_back(pipeline.tokenize(e.text));
  return build_cooccurrence(entries, pipeline, mode);
}

double t_score(std::uint64_t c, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t n) {
  if (c == 0) throw DomainError("t-score undefined for a pair that never co-occurs");
  if (n == 0) throw DomainError("t-score undefined for an empty corpus");
  const double cd = static_cast<double>(c);
  const double expected = static_cast<double>(occ_a) * static_cast<double>(occ_b) / static_cast<double>(n);
  return (cd - expected) / std::sqrt(cd);
}

double t_score(const WordPair& pair, const CooccurrenceTable& table) {
  return t_score(table.pair_count(pair.first, pair.second), table.word_count(pair.first),
                 table.word_count(pair.second), table.total_words());
}

HarmfulnessReport score_entry(std::string_view id, const std::vector<Token>& tokens, const CooccurrenceTable& table,
                              const Pipeline& pipeline) {
  HarmfulnessReport r;
  r.entry_id = std::string(id);
  const auto words = entry_vulgar_words(tokens, pipeline, table.mode());
  const bool raw = table.mode() == DedupMode::Raw;
  for (auto a = words.begin(); a != words.end(); ++a) {
    for (auto b = a; b != words.end(); ++b) {
      if (a == b && raw && a->second < 2) continue;
      WordPair pair{a->first, b->first};
      if (table.pair_count(pair.first, pair.second) == 0 || table.total_words() == 0) continue;
      const double t = t_score(pair, table);
      r.contributions.push_back({std::move(pair), t});
    }
  }
  for (const auto& c : r.contributions) r.total += c.t_score;
  return r;
}

std::vector<HarmfulnessReport> rank_entries(const Dataset& dataset, const CooccurrenceTable& table,
                                            const Pipeline& pipeline) {
  std::vector<HarmfulnessReport> out;
  out.reserve(dataset.size());
  for (const auto& e : dataset.entries()) {
    const auto tokens = pipeline.tokenize(e.text);
    auto r = score_entry(e.id, tokens, table, pipeline);
    r.spans = highlight(e.text, tokens, pipeline);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const HarmfulnessReport& a, const HarmfulnessReport& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.entry_id < b.entry_id;
  });
  return out;
}

namespace {

int kind_priority(std::string_view kind) {
  if (kind == "vulgarity") return 4;
  if (kind == "rule") return 3;
  if (kind == "expression" || kind == "cvs") return 2;
  if (kind == "emoteme") return 1;
  return 0;
}

}  // namespace

std::vector<LabeledSpan> merge_spans(std::vector<LabeledSpan> spans) {
  std::stable_sort(spans.begin(), spans.end(), [](const LabeledSpan& a, const LabeledSpan& b) {
    const int pa = kind_priority(a.kind), pb = kind_priority(b.kind);
    if (pa != pb) return pa > pb;
    if (a.span.size() != b.span.size()) return a.span.size() > b.span.size();
    return a.span.start < b.span.start;
  });
  std::vector<LabeledSpan> kept;
  for (const auto& s : spans) {
    if (s.span.size() == 0) continue;
    // Carve out the bytes already claimed by higher-ranked spans.
    std::vector<Span> pieces{s.span};
    for (const auto& k : kept) {
      std::vector<Span> next;
      for (const auto& p : pieces) {
        if (!p.overlaps(k.span)) {
          next.push_back(p);
          continue;
        }
        if (p.start < k.span.start) next.push_back({p.start, k.span.start});
        if (k.span.end < p.end) next.push_back({k.span.end, p.end});
      }
      pieces = std::move(next);
    }
    for (const auto& p : pieces) kept.push_back({p, s.kind, s.value});
  }
  std::sort(kept.begin(), kept.end(),
            [](const LabeledSpan& a, const LabeledSpan& b) { return a.span.start < b.span.start; });
  return kept;
}

std::vector<LabeledSpan> highlight(std::string_view text, const std::vector<Token>& tokens,
                                   const Pipeline& pipeline, const std::vector<RuleTrigger>& rules) {
  std::vector<LabeledSpan> spans;
  for (const auto& v : pipeline.vulgarities(tokens)) spans.push_back({v.span, "vulgarity", v.canonical});
  for (const auto& r : rules) {
    if (r.rule_id != kVulgarityRuleId) spans.push_back({r.span, "rule", r.rule_id});
  }
  for (auto& s : pipeline.affect().analyze(text, tokens).spans()) spans.push_back(std::move(s));
  return merge_spans(std::move(spans));
}

std::vector<LabeledSpan> highlight(const Entry& entry, const Pipeline& pipeline) {
  return highlight(entry.text, pipeline.tokenize(entry.text), pipeline);
}

nlohmann::json to_json(const LabeledSpan& s) {
  return {{"start", s.span.start}, {"end", s.span.end}, {"kind", s.kind}, {"value", s.value}};
}

nlohmann::json to_json(const HarmfulnessReport& r) {
  nlohmann::json contributions = nlohmann::json::array();
  for (const auto& c : r.contributions) {
    contributions.push_back({{"pair", {c.pair.first, c.pair.second}}, {"t_score", c.t_score}});
  }
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& s : r.spans) spans.push_back(to_json(s));
  return {{"entry_id", r.entry_id}, {"total", r.total}, {"contributions", contributions}, {"spans", spans}};
}

}  // namespace patrol
