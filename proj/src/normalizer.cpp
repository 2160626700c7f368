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

#include "patrol/normalizer.hpp"

#include <algorithm>
#include <numeric>

#include "patrol/error.hpp"

namespace patrol {

void NormalizerConfig::validate() const {
  if (threshold < 0) throw ValidationError("normalizer threshold must be non-negative");
  if (threshold > max_threshold) {
    throw ValidationError("normalizer threshold " + std::to_string(threshold) + " exceeds ceiling " +
                          std::to_string(max_threshold));
  }
}

int NormalizerConfig::threshold_for(std::size_t normalized_length) const {
  if (!length_scaled) return threshold;
  return std::min(static_cast<int>(normalized_length / 3), max_threshold);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string x = to_u32(a);
  const std::u32string y = to_u32(b);
  std::vector<std::size_t> prev(y.size() + 1);
  std::vector<std::size_t> cur(y.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

std::string collapse_prolongations(std::string_view word) {
  const std::u32string cps = to_u32(word);
  std::u32string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t j = i + 1;
    while (j < cps.size() && cps[j] == cps[i]) ++j;
    out.append(j - i >= 3 ? 1 : j - i, cps[i]);
    i = j;
  }
  return to_utf8(out);
}

std::string apply_heuristics(std::string_view word, const NormalizerConfig& config) {
  if (!config.strip_prolongations) return std::string(word);
  return collapse_prolongations(word);
}

std::optional<Match> match_canonical(std::string_view word, const LexiconBundle& bundle,
                                     const NormalizerConfig& config, const Romanizer& romanizer) {
  config.validate();
  Match m;
  m.input = std::string(word);
  std::string norm = romanizer.romanize(word);
  m.rule_trace.emplace_back("romanize");
  if (config.strip_prolongations) {
    std::string stripped = collapse_prolongations(norm);
    if (stripped != norm) m.rule_trace.emplace_back("strip_prolongation");
    norm = std::move(stripped);
  }
  if (norm.empty()) return std::nullopt;
  const std::u32string norm_cps = to_u32(norm);
  const int limit = config.threshold_for(norm_cps.size());

  const VulgarityEntry* best = nullptr;
  std::size_t best_dist = 0;
  for (const auto& v : bundle.vulgarities()) {
    if (config.anchor_first_letter) {
      const std::u32string r = to_u32(v.reading);
      if (r.empty() || r.front() != norm_cps.front()) continue;
    }
    const std::size_t d = levenshtein(norm, v.reading);
    if (d > static_cast<std::size_t>(limit)) continue;
    const bool better = !best || d < best_dist ||
                        (d == best_dist && (v.hit_rate > best->hit_rate ||
                                            (v.hit_rate == best->hit_rate && v.canonical < best->canonical)));
    if (better) {
      best = &v;
      best_dist = d;
    }
  }
  if (!best) return std::nullopt;
  if (config.anchor_first_letter) m.rule_trace.emplace_back("anchor_first_letter");
  m.rule_trace.push_back("levenshtein<=" + std::to_string(limit));
  m.canonical = best->canonical;
  m.distance = static_cast<int>(best_dist);
  return m;
}

}  // namespace patrol
