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

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patrol/lexicons.hpp"
#include "patrol/text.hpp"

namespace patrol {

struct Token {
  std::string surface;
  std::size_t start = 0;  // byte offsets into the analyzed text
  std::size_t end = 0;
  Pos pos = Pos::Unknown;
  std::string reading;  // romanized
  bool vulgar = false;  // dictionary hit on a registered vulgarity

  Span span() const { return {start, end}; }
  // ASCII-lowercased surface, the form every lexicon lookup uses.
  std::string key() const { return ascii_lower(surface); }
};

// Kana -> Latin transliteration. Longest table key wins; the small tsu
// doubles the following consonant and the prolonged sound mark repeats the
// preceding vowel. ASCII is lowercased, everything else passes through.
class Romanizer {
 public:
  explicit Romanizer(const std::vector<RomanizationRule>& rules);

  // The built-in Hepburn table (the same rows shipped in romanize.tsv).
  static const Romanizer& standard();
  static std::vector<RomanizationRule> standard_rules();

  std::string romanize(std::string_view surface) const;

 private:
  std::map<std::u32string, std::string> table_;
  std::size_t max_key_ = 1;
};

std::string romanize(std::string_view surface);

struct DictEntry {
  std::string surface;
  Pos pos = Pos::Unknown;
  std::string reading;
  bool vulgar = false;
};

// Surface -> entry view over the bundle's base words, emotemes, expression
// lemmas and vulgarities (canonicals and variants). Multi-word lemmas stay
// out; they are matched over token sequences downstream.
class Dictionary {
 public:
  Dictionary() = default;
  static Dictionary from_bundle(const LexiconBundle& bundle);

  // On a surface collision vulgarities win, then the lexicographically
  // smaller POS name.
  void insert(DictEntry entry);
  const DictEntry* find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t max_codepoints() const { return max_codepoints_; }

 private:
  std::map<std::string, DictEntry, std::less<>> entries_;
  std::size_t max_codepoints_ = 0;
};

struct AnalyzerConfig {
  std::shared_ptr<const Dictionary> dictionary = std::make_shared<Dictionary>();
  std::set<std::string, std::less<>> emphatic_particles = {"zo", "yo", "ne"};
  std::shared_ptr<const Romanizer> romanizer;  // null -> Romanizer::standard()

  static AnalyzerConfig from_bundle(const LexiconBundle& bundle);
  const Romanizer& roman() const { return romanizer ? *romanizer : Romanizer::standard(); }
};

// Extension point for a real morphological analyzer.
class Analyzer {
 public:
  virtual ~Analyzer() = default;
  virtual std::vector<Token> tokenize(std::string_view text) const = 0;
};

// Default analyzer. Latin and digit runs are looked up whole (spaces delimit
// words in romanized text). Kana/ideograph and symbol runs are segmented
// against the dictionary, maximizing the number of dictionary tokens and
// preferring the longest match at each step. Unmatched characters merge into
// one Unknown token per script-class run (symbol runs are tagged Symbol).
class DictionaryAnalyzer final : public Analyzer {
 public:
  explicit DictionaryAnalyzer(AnalyzerConfig config) : config_(std::move(config)) {}
  std::vector<Token> tokenize(std::string_view text) const override;
  const AnalyzerConfig& config() const { return config_; }

 private:
  AnalyzerConfig config_;
};

std::vector<Token> tokenize(std::string_view text, const AnalyzerConfig& config);

}  // namespace patrol
