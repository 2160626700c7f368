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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patrol/emoticon.hpp"
#include "patrol/lexicons.hpp"
#include "patrol/tokenizer.hpp"

namespace patrol {

// Where an emoteme was detected.
enum class EmotemeSource {
  Emoticon, Vulgarity, Lexicon, InterjectionPos, Particle, ExclamationMark, Ellipsis, Prolongation
};
std::string_view emoteme_source_name(EmotemeSource s);

struct Emoteme {
  Span span;
  EmotemeClass cls = EmotemeClass::Interjection;
  EmotemeSource source = EmotemeSource::Lexicon;
  std::string surface;
};

struct ExpressionHit {
  Span span;
  std::string lemma;
  Emotion emotion = Emotion::Joy;
  bool shifted = false;
  std::optional<Emotion> original;  // set iff shifted
  std::string cvs_pattern;          // the negation that caused the shift
  Span cvs_span;
};

struct EmoticonHit {
  Span span;
  std::string raw;
  EmoticonAnalysis analysis;
};

struct AffectResult {
  bool emotive = false;
  int emotive_value = 0;  // min(5, emotemes.size())
  std::vector<Emoteme> emotemes;
  std::vector<ExpressionHit> expressions;
  std::vector<EmoticonHit> emoticons;
  EmotionSet emoticon_emotions;

  EmotionSet expression_emotions() const;
  // Expression types plus emoticon types.
  EmotionSet emotions() const;
  // Emotemes, expressions and CVS phrases as display spans.
  std::vector<LabeledSpan> spans() const;
};

inline constexpr int kEmotiveValueCap = 5;

// Where a negated emotion lands on the valence/activation plane.
class FlipTable {
 public:
  // Dislike->{joy,fondness}, joy/fondness->{dislike}, gloom->{excitement,joy},
  // fear/anger->{relief}, relief->{fear,anger}, excitement->{gloom};
  // shame and surprise map to themselves.
  static FlipTable standard();

  EmotionSet targets(Emotion e) const { return table_[static_cast<std::size_t>(e)]; }
  EmotionSet flip(EmotionSet s) const;
  // Throws ValidationError on an empty target set.
  void set(Emotion source, EmotionSet targets);

 private:
  std::array<EmotionSet, kEmotionCount> table_{};
};

struct AffectConfig {
  FlipTable flips = FlipTable::standard();
  std::size_t cvs_window = 3;  // tokens after an expression a negation may start in
};

struct CvsOutcome {
  EmotionSet emotions;
  bool shifted = false;
  std::string pattern;
  Span span;
  int applications = 0;  // stacked negations applied
};

// Precompiled analyzer: lemmas, CVS patterns and emotemes are tokenized once
// with the same analyzer used on the input.
class AffectAnalyzer {
 public:
  AffectAnalyzer(LexiconBundle bundle, AnalyzerConfig analyzer, AffectConfig config = {});

  // Step 1 gathers emotemes (interjection tokens, sentence-final emphatic
  // particles, exclamation marks, ellipses, prolongation runs, emoteme and
  // vulgarity lexicon hits, emoticons). Step 2 runs only for emotive input:
  // expression lemmas, CVS shifting, emoticon emotions.
  AffectResult analyze(std::string_view text, const std::vector<Token>& tokens) const;
  AffectResult analyze(std::string_view text) const;

  // Applies negations found within the window after an expression. Stacked
  // negations (each starting within the window after the previous one) flip
  // repeatedly.
  CvsOutcome apply_cvs(Emotion expression, std::span<const Token> following) const;

  const LexiconBundle& bundle() const { return bundle_; }
  const AnalyzerConfig& analyzer() const { return analyzer_; }
  const AffectConfig& config() const { return config_; }

 private:
  struct Pattern {
    std::vector<std::string> keys;
    std::string text;
  };
  struct Lemma {
    std::vector<std::string> keys;
    std::size_t index;  // into bundle_.expressions()
  };

  std::vector<std::string> keys_of(std::string_view phrase) const;
  std::vector<Emoteme> collect_emotemes(std::string_view text, const std::vector<Token>& tokens,
                                        std::vector<EmoticonHit>& emoticons) const;

  LexiconBundle bundle_;
  AnalyzerConfig analyzer_;
  AffectConfig config_;
  std::vector<Pattern> cvs_;
  std::vector<Lemma> lemmas_;
};

AffectResult analyze(std::string_view text, const std::vector<Token>& tokens, const LexiconBundle& bundle,
                     const AnalyzerConfig& analyzer, const AffectConfig& config = {});

CvsOutcome apply_cvs(Emotion expression, std::span<const Token> following, const LexiconBundle& bundle,
                     const AnalyzerConfig& analyzer, const AffectConfig& config = {});

}  // namespace patrol
