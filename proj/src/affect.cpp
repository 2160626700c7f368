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

#include "patrol/affect.hpp"

#include <algorithm>

#include "patrol/error.hpp"

namespace patrol {

std::string_view emoteme_source_name(EmotemeSource s) {
  switch (s) {
    case EmotemeSource::Emoticon: return "emoticon";
    case EmotemeSource::Vulgarity: return "vulgarity";
    case EmotemeSource::Lexicon: return "lexicon";
    case EmotemeSource::InterjectionPos: return "interjection";
    case EmotemeSource::Particle: return "particle";
    case EmotemeSource::ExclamationMark: return "exclamation";
    case EmotemeSource::Ellipsis: return "ellipsis";
    case EmotemeSource::Prolongation: return "prolongation";
  }
  return "lexicon";
}

EmotionSet AffectResult::expression_emotions() const {
  EmotionSet s;
  for (const auto& x : expressions) s.insert(x.emotion);
  return s;
}

EmotionSet AffectResult::emotions() const { return expression_emotions() | emoticon_emotions; }

std::vector<LabeledSpan> AffectResult::spans() const {
  std::vector<LabeledSpan> out;
  for (const auto& e : emotemes) {
    out.push_back({e.span, "emoteme", std::string(emoteme_source_name(e.source)) + ":" + e.surface});
  }
  for (const auto& x : expressions) {
    std::string value(emotion_name(x.emotion));
    if (x.shifted && x.original) value = std::string(emotion_name(*x.original)) + "->" + value;
    out.push_back({x.span, "expression", value});
    if (x.shifted) out.push_back({x.cvs_span, "cvs", x.cvs_pattern});
  }
  std::sort(out.begin(), out.end(), [](const LabeledSpan& a, const LabeledSpan& b) {
    return std::tie(a.span.start, a.span.end, a.kind, a.value) <
           std::tie(b.span.start, b.span.end, b.kind, b.value);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FlipTable FlipTable::standard() {
  using E = Emotion;
  FlipTable t;
  t.table_[static_cast<std::size_t>(E::Dislike)] = {E::Joy, E::Fondness};
  t.table_[static_cast<std::size_t>(E::Joy)] = {E::Dislike};
  t.table_[static_cast<std::size_t>(E::Fondness)] = {E::Dislike};
  t.table_[static_cast<std::size_t>(E::Gloom)] = {E::Excitement, E::Joy};
  t.table_[static_cast<std::size_t>(E::Fear)] = {E::Relief};
  t.table_[static_cast<std::size_t>(E::Anger)] = {E::Relief};
  t.table_[static_cast<std::size_t>(E::Relief)] = {E::Fear, E::Anger};
  t.table_[static_cast<std::size_t>(E::Excitement)] = {E::Gloom};
  t.table_[static_cast<std::size_t>(E::Shame)] = {E::Shame};
  t.table_[static_cast<std::size_t>(E::Surprise)] = {E::Surprise};
  return t;
}

EmotionSet FlipTable::flip(EmotionSet s) const {
  EmotionSet out;
  for (Emotion e : s.to_vector()) out |= targets(e);
  return out;
}

void FlipTable::set(Emotion source, EmotionSet targets) {
  if (targets.empty()) throw ValidationError("flip targets must be non-empty");
  table_[static_cast<std::size_t>(source)] = targets;
}

AffectAnalyzer::AffectAnalyzer(LexiconBundle bundle, AnalyzerConfig analyzer, AffectConfig config)
    : bundle_(std::move(bundle)), analyzer_(std::move(analyzer)), config_(std::move(config)) {
  for (const auto& p : bundle_.cvs_patterns()) {
    auto keys = keys_of(p.pattern);
    if (!keys.empty()) cvs_.push_back({std::move(keys), p.pattern});
  }
  // Longer patterns first so the most specific negation wins at a position.
  std::stable_sort(cvs_.begin(), cvs_.end(),
                   [](const Pattern& a, const Pattern& b) { return a.keys.size() > b.keys.size(); });
  for (std::size_t i = 0; i < bundle_.expressions().size(); ++i) {
    auto keys = keys_of(bundle_.expressions()[i].lemma);
    if (!keys.empty()) lemmas_.push_back({std::move(keys), i});
  }
  std::stable_sort(lemmas_.begin(), lemmas_.end(),
                   [](const Lemma& a, const Lemma& b) { return a.keys.size() > b.keys.size(); });
}

std::vector<std::string> AffectAnalyzer::keys_of(std::string_view phrase) const {
  std::vector<std::string> keys;
  for (const auto& t : tokenize(phrase, analyzer_)) keys.push_back(t.key());
  return keys;
}

namespace {

bool matches_at(std::span<const Token> tokens, std::size_t at, const std::vector<std::string>& keys) {
  if (at + keys.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (tokens[at + k].key() != keys[k]) return false;
  }
  return true;
}

int priority(EmotemeSource s) { return static_cast<int>(s); }

bool is_exclamation(char32_t c) { return c == U'!' || c == 0xFF01; }
bool is_dot(char32_t c) { return c == U'.' || c == 0xFF0E || c == 0x3002; }
bool is_ellipsis_char(char32_t c) { return c == 0x2026 || c == 0x2025; }

}  // namespace

std::vector<Emoteme> AffectAnalyzer::collect_emotemes(std::string_view text, const std::vector<Token>& tokens,
                                                      std::vector<EmoticonHit>& emoticons) const {
  std::vector<Emoteme> cands;

  for (const auto& c : extract_emoticons(text, bundle_)) {
    cands.push_back({c.span, EmotemeClass::Emoticon, EmotemeSource::Emoticon, c.raw});
    emoticons.push_back({c.span, c.raw, analyze_emoticon_detailed(c.raw, bundle_)});
  }

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const std::string key = t.key();
    if (t.vulgar || bundle_.vulgarity_for_surface(key)) {
      cands.push_back({t.span(), EmotemeClass::Vulgarity, EmotemeSource::Vulgarity, t.surface});
    }
    for (const auto& e : bundle_.emotemes()) {
      if (e.matches(key)) {
        cands.push_back({t.span(), e.cls, EmotemeSource::Lexicon, t.surface});
        break;
      }
    }
    if (t.pos == Pos::Interjection) {
      cands.push_back({t.span(), EmotemeClass::Interjection, EmotemeSource::InterjectionPos, t.surface});
    }
    if (analyzer_.emphatic_particles.contains(key)) {
      const bool final = i + 1 == tokens.size() || tokens[i + 1].pos == Pos::Symbol ||
                         analyzer_.emphatic_particles.contains(tokens[i + 1].key());
      if (final) cands.push_back({t.span(), EmotemeClass::Exclamation, EmotemeSource::Particle, t.surface});
    }
  }

  const auto cps = decode_utf8(text);
  const auto span_of = [&](std::size_t b, std::size_t e) {
    return Span{cps[b].offset, cps[e - 1].offset + cps[e - 1].length};
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i].value;
    std::size_t j = i + 1;
    if (is_exclamation(c)) {
      while (j < cps.size() && is_exclamation(cps[j].value)) ++j;
      const Span s = span_of(i, j);
      cands.push_back({s, EmotemeClass::Exclamation, EmotemeSource::ExclamationMark,
                       std::string(text.substr(s.start, s.size()))});
    } else if (is_dot(c) || is_ellipsis_char(c)) {
      while (j < cps.size() && (is_dot(cps[j].value) || is_ellipsis_char(cps[j].value))) ++j;
      bool has_ellipsis_char = false;
      for (std::size_t k = i; k < j; ++k) has_ellipsis_char |= is_ellipsis_char(cps[k].value);
      if (j - i >= 2 || has_ellipsis_char) {
        const Span s = span_of(i, j);
        cands.push_back({s, EmotemeClass::Exclamation, EmotemeSource::Ellipsis,
                         std::string(text.substr(s.start, s.size()))});
      }
    } else if (script_class(c) != ScriptClass::Whitespace) {
      while (j < cps.size() && cps[j].value == c) ++j;
      if (j - i >= 3) {
        const Span s = span_of(i, j);
        cands.push_back({s, EmotemeClass::Exclamation, EmotemeSource::Prolongation,
                         std::string(text.substr(s.start, s.size()))});
      }
    }
    i = j;
  }

  // Keep the highest-priority, then longest, candidate among overlaps.
  std::stable_sort(cands.begin(), cands.end(), [](const Emoteme& a, const Emoteme& b) {
    if (priority(a.source) != priority(b.source)) return priority(a.source) < priority(b.source);
    if (a.span.size() != b.span.size()) return a.span.size() > b.span.size();
    return a.span.start < b.span.start;
  });
  std::vector<Emoteme> kept;
  for (auto& c : cands) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Emoteme& k) { return k.span.overlaps(c.span); });
    if (!clash) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), [](const Emoteme& a, const Emoteme& b) { return a.span.start < b.span.start; });
  return kept;
}

CvsOutcome AffectAnalyzer::apply_cvs(Emotion expression, std::span<const Token> following) const {
  CvsOutcome out;
  out.emotions = {expression};
  std::size_t from = 0;
  while (true) {
    bool found = false;
    const std::size_t limit = std::min(following.size(), from + config_.cvs_window);
    for (std::size_t at = from; at < limit && !found; ++at) {
      for (const auto& p : cvs_) {
        if (!matches_at(following, at, p.keys)) continue;
        out.emotions = config_.flips.flip(out.emotions);
        out.shifted = true;
        ++out.applications;
        const Span s{following[at].start, following[at + p.keys.size() - 1].end};
        if (out.applications == 1) {
          out.pattern = p.text;
          out.span = s;
        } else {
          out.pattern += " + " + p.text;
          out.span.end = s.end;
        }
        from = at + p.keys.size();
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  return out;
}

AffectResult AffectAnalyzer::analyze(std::string_view text, const std::vector<Token>& tokens) const {
  AffectResult r;
  r.emotemes = collect_emotemes(text, tokens, r.emoticons);
  r.emotive = !r.emotemes.empty();
  r.emotive_value = std::min<int>(kEmotiveValueCap, static_cast<int>(r.emotemes.size()));
  if (!r.emotive) {
    r.emoticons.clear();
    return r;
  }
  const std::span<const Token> all(tokens);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (const auto& lemma : lemmas_) {
      if (matched && lemma.keys.size() < matched) break;
      if (!matches_at(all, i, lemma.keys)) continue;
      const EmotiveExpressionEntry& entry = bundle_.expressions()[lemma.index];
      matched = lemma.keys.size();
      const Span span{tokens[i].start, tokens[i + matched - 1].end};
      const CvsOutcome cvs = apply_cvs(entry.emotion, all.subspan(i + matched));
      for (Emotion e : cvs.emotions.to_vector()) {
        ExpressionHit hit;
        hit.span = span;
        hit.lemma = entry.lemma;
        hit.emotion = e;
        hit.shifted = cvs.shifted;
        if (cvs.shifted) {
          hit.original = entry.emotion;
          hit.cvs_pattern = cvs.pattern;
          hit.cvs_span = cvs.span;
        }
        r.expressions.push_back(std::move(hit));
      }
    }
    i += matched ? matched : 1;
  }
  for (const auto& e : r.emoticons) r.emoticon_emotions |= e.analysis.emotions;
  return r;
}

AffectResult AffectAnalyzer::analyze(std::string_view text) const {
  return analyze(text, tokenize(text, analyzer_));
}

AffectResult analyze(std::string_view text, const std::vector<Token>& tokens, const LexiconBundle& bundle,
                     const AnalyzerConfig& analyzer, const AffectConfig& config) {
  return AffectAnalyzer(bundle, analyzer, config).analyze(text, tokens);
}

CvsOutcome apply_cvs(Emotion expression, std::span<const Token> following, const LexiconBundle& bundle,
                     const AnalyzerConfig& analyzer, const AffectConfig& config) {
  return AffectAnalyzer(bundle, analyzer, config).apply_cvs(expression, following);
}

}  // namespace patrol
