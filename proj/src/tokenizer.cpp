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

#include "patrol/tokenizer.hpp"

#include <algorithm>

namespace patrol {

namespace {

constexpr char32_t kSmallTsuHira = 0x3063;
constexpr char32_t kSmallTsuKata = 0x30C3;
constexpr char32_t kProlongMark = 0x30FC;

struct KanaRow {
  const char* kana;  // hiragana
  const char* latin;
};

// Hepburn hiragana table; katakana rows are derived by code-point offset.
constexpr KanaRow kHiragana[] = {
    {"あ", "a"},    {"い", "i"},    {"う", "u"},    {"え", "e"},    {"お", "o"},
    {"か", "ka"},   {"き", "ki"},   {"く", "ku"},   {"け", "ke"},   {"こ", "ko"},
    {"さ", "sa"},   {"し", "shi"},  {"す", "su"},   {"せ", "se"},   {"そ", "so"},
    {"た", "ta"},   {"ち", "chi"},  {"つ", "tsu"},  {"て", "te"},   {"と", "to"},
    {"な", "na"},   {"に", "ni"},   {"ぬ", "nu"},   {"ね", "ne"},   {"の", "no"},
    {"は", "ha"},   {"ひ", "hi"},   {"ふ", "fu"},   {"へ", "he"},   {"ほ", "ho"},
    {"ま", "ma"},   {"み", "mi"},   {"む", "mu"},   {"め", "me"},   {"も", "mo"},
    {"や", "ya"},   {"ゆ", "yu"},   {"よ", "yo"},
    {"ら", "ra"},   {"り", "ri"},   {"る", "ru"},   {"れ", "re"},   {"ろ", "ro"},
    {"わ", "wa"},   {"ゐ", "wi"},   {"ゑ", "we"},   {"を", "wo"},   {"ん", "n"},
    {"が", "ga"},   {"ぎ", "gi"},   {"ぐ", "gu"},   {"げ", "ge"},   {"ご", "go"},
    {"ざ", "za"},   {"じ", "ji"},   {"ず", "zu"},   {"ぜ", "ze"},   {"ぞ", "zo"},
    {"だ", "da"},   {"ぢ", "ji"},   {"づ", "zu"},   {"で", "de"},   {"ど", "do"},
    {"ば", "ba"},   {"び", "bi"},   {"ぶ", "bu"},   {"べ", "be"},   {"ぼ", "bo"},
    {"ぱ", "pa"},   {"ぴ", "pi"},   {"ぷ", "pu"},   {"ぺ", "pe"},   {"ぽ", "po"},
    {"ぁ", "a"},    {"ぃ", "i"},    {"ぅ", "u"},    {"ぇ", "e"},    {"ぉ", "o"},
    {"ゃ", "ya"},   {"ゅ", "yu"},   {"ょ", "yo"},   {"ゎ", "wa"},   {"ゔ", "vu"},
    {"きゃ", "kya"}, {"きゅ", "kyu"}, {"きょ", "kyo"},
    {"しゃ", "sha"}, {"しゅ", "shu"}, {"しょ", "sho"},
    {"ちゃ", "cha"}, {"ちゅ", "chu"}, {"ちょ", "cho"},
    {"にゃ", "nya"}, {"にゅ", "nyu"}, {"にょ", "nyo"},
    {"ひゃ", "hya"}, {"ひゅ", "hyu"}, {"ひょ", "hyo"},
    {"みゃ", "mya"}, {"みゅ", "myu"}, {"みょ", "myo"},
    {"りゃ", "rya"}, {"りゅ", "ryu"}, {"りょ", "ryo"},
    {"ぎゃ", "gya"}, {"ぎゅ", "gyu"}, {"ぎょ", "gyo"},
    {"じゃ", "ja"},  {"じゅ", "ju"},  {"じょ", "jo"},
    {"ぢゃ", "ja"},  {"ぢゅ", "ju"},  {"ぢょ", "jo"},
    {"びゃ", "bya"}, {"びゅ", "byu"}, {"びょ", "byo"},
    {"ぴゃ", "pya"}, {"ぴゅ", "pyu"}, {"ぴょ", "pyo"},
    {"しぇ", "she"}, {"じぇ", "je"},  {"ちぇ", "che"},
};

// Loanword spellings that only occur in katakana.
constexpr KanaRow kKatakanaOnly[] = {
    {"ファ", "fa"}, {"フィ", "fi"}, {"フェ", "fe"}, {"フォ", "fo"}, {"ティ", "ti"},
    {"ディ", "di"}, {"デュ", "dyu"}, {"トゥ", "tu"}, {"ウィ", "wi"}, {"ウェ", "we"},
    {"ウォ", "wo"}, {"ヴァ", "va"}, {"ヴィ", "vi"}, {"ヴェ", "ve"}, {"ヴォ", "vo"},
};

std::string to_katakana(std::string_view hira) {
  std::u32string cps = to_u32(hira);
  for (char32_t& c : cps) {
    if (c >= 0x3041 && c <= 0x3096) c += 0x60;
  }
  return to_utf8(cps);
}

bool is_vowel(char c) { return c == 'a' || c == 'i' || c == 'u' || c == 'e' || c == 'o'; }

}  // namespace

std::vector<RomanizationRule> Romanizer::standard_rules() {
  std::vector<RomanizationRule> rows;
  for (const auto& r : kHiragana) rows.push_back({r.kana, r.latin});
  for (const auto& r : kHiragana) rows.push_back({to_katakana(r.kana), r.latin});
  for (const auto& r : kKatakanaOnly) rows.push_back({r.kana, r.latin});
  return rows;
}

Romanizer::Romanizer(const std::vector<RomanizationRule>& rules) {
  for (const auto& r : rules) {
    auto key = to_u32(r.kana);
    if (key.empty()) continue;
    max_key_ = std::max(max_key_, key.size());
    table_[std::move(key)] = r.latin;
  }
}

const Romanizer& Romanizer::standard() {
  static const Romanizer instance(standard_rules());
  return instance;
}

std::string Romanizer::romanize(std::string_view surface) const {
  const std::u32string cps = to_u32(surface);
  std::string out;
  bool double_next = false;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (c == kSmallTsuHira || c == kSmallTsuKata) {
      double_next = true;
      ++i;
      continue;
    }
    if (c == kProlongMark) {
      if (!out.empty() && is_vowel(out.back())) out.push_back(out.back());
      double_next = false;
      ++i;
      continue;
    }
    bool matched = false;
    for (std::size_t len = std::min(max_key_, cps.size() - i); len >= 1; --len) {
      const auto it = table_.find(cps.substr(i, len));
      if (it == table_.end()) continue;
      const std::string& latin = it->second;
      if (double_next && !latin.empty() && !is_vowel(latin[0]) && latin[0] != 'n') {
        out.push_back(latin.rfind("ch", 0) == 0 ? 't' : latin[0]);
      }
      out += latin;
      i += len;
      matched = true;
      break;
    }
    double_next = false;
    if (matched) continue;
    if (c < 0x80) {
      out.push_back(static_cast<char>(c >= U'A' && c <= U'Z' ? c - U'A' + U'a' : c));
    } else {
      append_utf8(out, c);
    }
    ++i;
  }
  return out;
}

std::string romanize(std::string_view surface) { return Romanizer::standard().romanize(surface); }

void Dictionary::insert(DictEntry entry) {
  std::string key = ascii_lower(entry.surface);
  if (key.empty()) return;
  const auto it = entries_.find(key);
  if (it != entries_.end()) {
    const DictEntry& old = it->second;
    const bool replace = (entry.vulgar && !old.vulgar) ||
                         (entry.vulgar == old.vulgar && pos_name(entry.pos) < pos_name(old.pos));
    if (!replace) return;
  }
  max_codepoints_ = std::max(max_codepoints_, to_u32(key).size());
  entries_[std::move(key)] = std::move(entry);
}

const DictEntry* Dictionary::find(std::string_view surface) const {
  const auto it = entries_.find(ascii_lower(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

Dictionary Dictionary::from_bundle(const LexiconBundle& bundle) {
  Dictionary d;
  const auto single = [](std::string_view s) { return s.find(' ') == std::string_view::npos; };
  for (const auto& w : bundle.base_words()) d.insert({w.surface, w.pos, w.reading, false});
  for (const auto& e : bundle.emotemes()) {
    if (!single(e.surface)) continue;
    Pos pos = e.pos.value_or(Pos::Interjection);
    if (!e.pos) {
      switch (e.cls) {
        case EmotemeClass::Vulgarity: pos = Pos::Adjective; break;
        case EmotemeClass::Mimetic: pos = Pos::Noun; break;
        case EmotemeClass::Emoticon: pos = Pos::Symbol; break;
        default: break;
      }
    }
    d.insert({e.surface, pos, {}, false});
  }
  for (const auto& x : bundle.expressions()) {
    if (single(x.lemma)) d.insert({x.lemma, x.pos, {}, false});
  }
  for (const auto& v : bundle.vulgarities()) {
    d.insert({v.canonical, v.pos, v.reading, true});
    for (const auto& var : v.variants) d.insert({var, v.pos, {}, true});
  }
  return d;
}

AnalyzerConfig AnalyzerConfig::from_bundle(const LexiconBundle& bundle) {
  AnalyzerConfig cfg;
  cfg.dictionary = std::make_shared<Dictionary>(Dictionary::from_bundle(bundle));
  if (!bundle.romanization().empty()) cfg.romanizer = std::make_shared<Romanizer>(bundle.romanization());
  return cfg;
}

namespace {

// Segment classes for the outer run split. Kana and ideographs share one
// segment so mixed-script dictionary words can match.
enum class Segment { Space, Word, Cjk, Symbol };

Segment segment_of(ScriptClass c) {
  switch (c) {
    case ScriptClass::Whitespace: return Segment::Space;
    case ScriptClass::Latin:
    case ScriptClass::Digit: return Segment::Word;
    case ScriptClass::Kana:
    case ScriptClass::Ideograph: return Segment::Cjk;
    case ScriptClass::Symbol: return Segment::Symbol;
  }
  return Segment::Symbol;
}

Token make_token(std::string_view text, std::size_t start, std::size_t end, const DictEntry* hit,
                 bool symbol_run, const AnalyzerConfig& cfg) {
  Token t;
  t.surface = std::string(text.substr(start, end - start));
  t.start = start;
  t.end = end;
  if (hit) {
    t.pos = hit->pos;
    t.vulgar = hit->vulgar;
    t.reading = hit->reading;
  } else {
    t.pos = symbol_run ? Pos::Symbol : Pos::Unknown;
  }
  if (t.reading.empty()) t.reading = cfg.roman().romanize(t.surface);
  return t;
}

// Splits a Latin/digit word run further at the Latin/digit boundary, then
// looks each piece up whole.
void tokenize_word_run(std::string_view text, const std::vector<CodePoint>& cps, std::size_t b,
                       std::size_t e, const AnalyzerConfig& cfg, std::vector<Token>& out) {
  std::size_t i = b;
  while (i < e) {
    const ScriptClass cls = script_class(cps[i].value);
    std::size_t j = i + 1;
    while (j < e && script_class(cps[j].value) == cls) ++j;
    const std::size_t start = cps[i].offset;
    const std::size_t end = cps[j - 1].offset + cps[j - 1].length;
    const DictEntry* hit = cfg.dictionary->find(text.substr(start, end - start));
    out.push_back(make_token(text, start, end, hit, false, cfg));
    i = j;
  }
}

// Maximizes the code points covered by dictionary words, then minimizes
// the number of words; remaining ties prefer the longer first token.
void tokenize_lattice_run(std::string_view text, const std::vector<CodePoint>& cps, std::size_t b,
                          std::size_t e, bool symbol_run, const AnalyzerConfig& cfg,
                          std::vector<Token>& out) {
  const std::size_t n = e - b;
  const std::size_t max_len = cfg.dictionary->max_codepoints();
  std::vector<std::size_t> covered(n + 1, 0);  // dictionary code points in suffix
  std::vector<std::size_t> words(n + 1, 0);    // dictionary tokens in suffix
  std::vector<std::size_t> step(n + 1, 1);     // codepoints consumed at i
  std::vector<const DictEntry*> hit(n + 1, nullptr);
  for (std::size_t i = n; i-- > 0;) {
    covered[i] = covered[i + 1];
    words[i] = words[i + 1];
    step[i] = 1;
    hit[i] = nullptr;
    const std::size_t start = cps[b + i].offset;
    for (std::size_t len = std::min(max_len, n - i); len >= 1; --len) {
      const auto& last = cps[b + i + len - 1];
      const DictEntry* d = cfg.dictionary->find(text.substr(start, last.offset + last.length - start));
      if (!d) continue;
      const std::size_t c = len + covered[i + len];
      const std::size_t w = 1 + words[i + len];
      if (c > covered[i] || (c == covered[i] && (!hit[i] || w < words[i]))) {
        covered[i] = c;
        words[i] = w;
        step[i] = len;
        hit[i] = d;
      }
    }
  }
  std::size_t i = 0;
  while (i < n) {
    if (hit[i]) {
      const auto& first = cps[b + i];
      const auto& last = cps[b + i + step[i] - 1];
      out.push_back(make_token(text, first.offset, last.offset + last.length, hit[i], symbol_run, cfg));
      i += step[i];
      continue;
    }
    // Merge unmatched code points of the same script class.
    const ScriptClass cls = script_class(cps[b + i].value);
    std::size_t j = i + 1;
    while (j < n && !hit[j] && script_class(cps[b + j].value) == cls) ++j;
    const auto& last = cps[b + j - 1];
    out.push_back(make_token(text, cps[b + i].offset, last.offset + last.length, nullptr, symbol_run, cfg));
    i = j;
  }
}

}  // namespace

std::vector<Token> DictionaryAnalyzer::tokenize(std::string_view text) const {
  std::vector<Token> out;
  const auto cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    const Segment seg = segment_of(script_class(cps[i].value));
    std::size_t j = i + 1;
    while (j < cps.size() && segment_of(script_class(cps[j].value)) == seg) ++j;
    switch (seg) {
      case Segment::Space: break;
      case Segment::Word: tokenize_word_run(text, cps, i, j, config_, out); break;
      case Segment::Cjk: tokenize_lattice_run(text, cps, i, j, false, config_, out); break;
      case Segment::Symbol: tokenize_lattice_run(text, cps, i, j, true, config_, out); break;
    }
    i = j;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text, const AnalyzerConfig& config) {
  return DictionaryAnalyzer(config).tokenize(text);
}

}  // namespace patrol
