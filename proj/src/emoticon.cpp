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

#include "patrol/emoticon.hpp"

#include <algorithm>

namespace patrol {

namespace {

bool word_class(ScriptClass c) {
  return c == ScriptClass::Latin || c == ScriptClass::Kana || c == ScriptClass::Ideograph ||
         c == ScriptClass::Digit;
}

EmotionSet area_emotions(const LexiconBundle& bundle, char32_t glyph, Area area) {
  EmotionSet out;
  for (const AreaGlyph* g : bundle.find_glyph(glyph)) {
    if (g->area == area) out |= g->emotions;
  }
  return out;
}

bool has_area(const LexiconBundle& bundle, char32_t glyph, Area area) {
  for (const AreaGlyph* g : bundle.find_glyph(glyph)) {
    if (g->area == area) return true;
  }
  return false;
}

}  // namespace

std::vector<EmoticonCandidate> extract_emoticons(std::string_view text, const LexiconBundle& bundle) {
  const auto cps = decode_utf8(text);
  const std::size_t n = cps.size();
  const auto cls = [&](std::size_t i) { return script_class(cps[i].value); };
  const auto member = [&](std::size_t i) {
    return cls(i) == ScriptClass::Symbol || !bundle.find_glyph(cps[i].value).empty();
  };

  std::vector<EmoticonCandidate> out;
  std::vector<std::pair<std::size_t, std::size_t>> taken;  // code point ranges

  std::size_t i = 0;
  while (i < n) {
    if (!member(i)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && member(j)) ++j;
    std::size_t b = i;
    std::size_t e = j;
    i = j;
    // Glyph letters glued to a word belong to the word ("no^^" keeps "^^").
    while (b < e && b > 0 && word_class(cls(b)) && cls(b - 1) == cls(b)) ++b;
    while (e > b && e < n && word_class(cls(e - 1)) && cls(e) == cls(e - 1)) --e;
    if (e - b < 3) continue;
    bool has_symbol = false;
    bool has_feature = false;
    for (std::size_t k = b; k < e; ++k) {
      has_symbol |= cls(k) == ScriptClass::Symbol;
      has_feature |= bundle.is_area_glyph(cps[k].value);
    }
    if (!has_symbol || !has_feature) continue;
    const std::size_t start = cps[b].offset;
    const std::size_t end = cps[e - 1].offset + cps[e - 1].length;
    out.push_back({{start, end}, std::string(text.substr(start, end - start))});
    taken.emplace_back(b, e);
  }

  std::vector<const EmoticonRecord*> db;
  for (const auto& r : bundle.emoticons()) db.push_back(&r);
  std::stable_sort(db.begin(), db.end(),
                   [](const auto* x, const auto* y) { return x->raw.size() > y->raw.size(); });
  const auto is_taken = [&](std::size_t b, std::size_t e) {
    return std::any_of(taken.begin(), taken.end(),
                       [&](const auto& t) { return b < t.second && t.first < e; });
  };
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto* rec : db) {
      const std::size_t off = cps[p].offset;
      if (text.compare(off, rec->raw.size(), rec->raw) != 0) continue;
      std::size_t q = p;
      while (q < n && cps[q].offset < off + rec->raw.size()) ++q;
      if (is_taken(p, q)) continue;
      const ScriptClass first = cls(p);
      const ScriptClass last = cls(q - 1);
      if (word_class(first) && p > 0 && cls(p - 1) == first) continue;
      if (word_class(last) && q < n && cls(q) == last) continue;
      out.push_back({{off, off + rec->raw.size()}, rec->raw});
      taken.emplace_back(p, q);
      p = q - 1;
      break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.span.start < y.span.start; });
  return out;
}

EmoticonAnalysis analyze_emoticon_detailed(std::string_view raw, const LexiconBundle& bundle) {
  EmoticonAnalysis result;
  if (raw.empty()) return result;
  if (const auto* rec = bundle.find_emoticon(raw)) {
    result.emotions = rec->emotions;
    result.step = EmoticonStep::Database;
    return result;
  }
  const std::u32string cps = to_u32(raw);
  for (std::size_t k = 0; k + 2 < cps.size(); ++k) {
    if (cps[k] != cps[k + 2]) continue;
    if (!has_area(bundle, cps[k], Area::Eyes) || !has_area(bundle, cps[k + 1], Area::Mouth)) continue;
    const EmotionSet eyes = area_emotions(bundle, cps[k], Area::Eyes);
    const EmotionSet mouth = area_emotions(bundle, cps[k + 1], Area::Mouth);
    const EmotionSet both = eyes & mouth;
    result.emotions = both.empty() ? (eyes | mouth) : both;
    result.step = EmoticonStep::Triplet;
    return result;
  }
  for (char32_t c : cps) {
    for (const AreaGlyph* g : bundle.find_glyph(c)) result.emotions |= g->emotions;
  }
  if (!result.emotions.empty()) result.step = EmoticonStep::Areas;
  return result;
}

EmotionSet analyze_emoticon(std::string_view raw, const LexiconBundle& bundle) {
  return analyze_emoticon_detailed(raw, bundle).emotions;
}

}  // namespace patrol
