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

namespace patrol {

// The ten emotion types of the expression dictionary.
enum class Emotion : std::uint8_t {
  Joy, Fondness, Relief, Gloom, Fear, Anger, Dislike, Shame, Excitement, Surprise
};
inline constexpr int kEmotionCount = 10;

enum class Valence { Positive, Negative, Both };
enum class Activation { Activated, Deactivated, Moderate };

Valence valence(Emotion e);
Activation activation(Emotion e);
std::string_view emotion_name(Emotion e);
std::string_view valence_name(Valence v);
// Accepts the ten lowercase names only; throws ValidationError otherwise.
Emotion parse_emotion(std::string_view name);

// Small value set of emotions backed by a bit mask.
class EmotionSet {
 public:
  EmotionSet() = default;
  EmotionSet(std::initializer_list<Emotion> es) {
    for (Emotion e : es) insert(e);
  }

  void insert(Emotion e) { bits_ |= bit(e); }
  bool contains(Emotion e) const { return (bits_ & bit(e)) != 0; }
  bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  std::vector<Emotion> to_vector() const;

  EmotionSet operator|(EmotionSet o) const { return from_bits(bits_ | o.bits_); }
  EmotionSet operator&(EmotionSet o) const { return from_bits(bits_ & o.bits_); }
  EmotionSet& operator|=(EmotionSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  bool is_subset_of(EmotionSet o) const { return (bits_ & ~o.bits_) == 0; }
  friend bool operator==(EmotionSet, EmotionSet) = default;

 private:
  static std::uint16_t bit(Emotion e) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(e)); }
  static EmotionSet from_bits(std::uint16_t b) {
    EmotionSet s;
    s.bits_ = b;
    return s;
  }
  std::uint16_t bits_ = 0;
};

// Comma-separated emotion names, e.g. "joy,surprise". Empty string -> {}.
EmotionSet parse_emotion_list(std::string_view list);
std::string format_emotion_list(EmotionSet set);

enum class Pos { Noun, ProperNoun, Verb, Adjective, Interjection, Particle, Symbol, Unknown };
std::string_view pos_name(Pos p);
Pos parse_pos(std::string_view name);

enum class EmotemeClass { Interjection, Exclamation, Vulgarity, Mimetic, Emoticon };
std::string_view emoteme_class_name(EmotemeClass c);
EmotemeClass parse_emoteme_class(std::string_view name);

struct EmotemeEntry {
  std::string surface;        // lowercase; without the trailing '+' wildcard
  EmotemeClass cls = EmotemeClass::Interjection;
  bool repeat_final = false;  // "sugee+" also matches "sugeee", "sugeeee", ...
  std::optional<Pos> pos;

  bool matches(std::string_view lowered_word) const;
};

struct EmotiveExpressionEntry {
  std::string lemma;  // may span several whitespace-separated words
  Emotion emotion = Emotion::Joy;
  Pos pos = Pos::Noun;
};

enum class CvsKind { Negation };

struct CvsPattern {
  std::string pattern;  // whitespace-separated token sequence
  CvsKind kind = CvsKind::Negation;
};

struct VulgarityEntry {
  std::string canonical;
  Pos pos = Pos::Adjective;
  std::string reading;  // romanized
  std::uint64_t hit_rate = 0;
  std::vector<std::string> variants;
};

struct EmoticonRecord {
  std::string raw;
  EmotionSet emotions;
};

enum class Area { Eyes, Mouth, Other };
std::string_view area_name(Area a);

struct AreaGlyph {
  char32_t glyph = 0;
  Area area = Area::Other;
  EmotionSet emotions;
};

struct BaseWord {
  std::string surface;
  Pos pos = Pos::Noun;
  std::string reading;
};

struct RomanizationRule {
  std::string kana;
  std::string latin;
};

// Raw TSV contents keyed by file name; lets tests build bundles in memory.
struct LexiconSources {
  std::string emotemes;
  std::string expressions;
  std::string cvs;
  std::string vulgarities;
  std::string emoticons;
  std::string areas;
  std::optional<std::string> words;
  std::optional<std::string> romanize;
};

// Immutable, validated set of the lexical databases. Copies are cheap enough
// for the seed sizes; registration produces a new bundle.
class LexiconBundle {
 public:
  LexiconBundle() = default;

  const std::vector<EmotemeEntry>& emotemes() const { return emotemes_; }
  const std::vector<EmotiveExpressionEntry>& expressions() const { return expressions_; }
  const std::vector<CvsPattern>& cvs_patterns() const { return cvs_; }
  const std::vector<VulgarityEntry>& vulgarities() const { return vulgarities_; }
  const std::vector<EmoticonRecord>& emoticons() const { return emoticons_; }
  const std::vector<AreaGlyph>& areas() const { return areas_; }
  const std::vector<BaseWord>& base_words() const { return base_words_; }
  const std::vector<RomanizationRule>& romanization() const { return romanization_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  const VulgarityEntry* find_vulgarity(std::string_view canonical) const;
  // Looks a surface up among canonicals and registered variants
  // (ASCII-lowercased). Returns the owning entry.
  const VulgarityEntry* vulgarity_for_surface(std::string_view surface) const;
  const EmoticonRecord* find_emoticon(std::string_view raw) const;
  // All area rows for a glyph (a glyph may serve as both eye and mouth).
  std::vector<const AreaGlyph*> find_glyph(char32_t glyph) const;
  bool is_area_glyph(char32_t glyph) const;

  static LexiconBundle from_sources(const LexiconSources& sources);

  // Throws ConflictError if the canonical form is already present.
  LexiconBundle register_vulgarity(VulgarityEntry entry) const;

 private:
  void reindex();

  std::vector<EmotemeEntry> emotemes_;
  std::vector<EmotiveExpressionEntry> expressions_;
  std::vector<CvsPattern> cvs_;
  std::vector<VulgarityEntry> vulgarities_;
  std::vector<EmoticonRecord> emoticons_;
  std::vector<AreaGlyph> areas_;
  std::vector<BaseWord> base_words_;
  std::vector<RomanizationRule> romanization_;
  std::vector<std::string> warnings_;

  std::map<std::string, std::size_t, std::less<>> vulgarity_by_canonical_;
  std::map<std::string, std::size_t, std::less<>> vulgarity_by_surface_;
  std::map<std::string, std::size_t, std::less<>> emoticon_by_raw_;
};

// Reads emotemes.tsv, expressions.tsv, cvs.tsv, vulgarities.tsv,
// emoticons.tsv and areas.tsv (required) plus words.tsv and romanize.tsv
// (optional). A missing required file raises IoError naming it.
LexiconBundle load_lexicons(const std::filesystem::path& dir);

LexiconBundle register_vulgarity(const LexiconBundle& bundle, VulgarityEntry entry);

}  // namespace patrol
