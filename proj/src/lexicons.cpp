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

#include "patrol/lexicons.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "patrol/error.hpp"
#include "patrol/text.hpp"

namespace patrol {

namespace {

constexpr std::string_view kEmotionNames[kEmotionCount] = {
    "joy", "fondness", "relief", "gloom", "fear", "anger", "dislike", "shame", "excitement", "surprise"};

constexpr std::string_view kPosNames[] = {"noun",         "proper_noun", "verb",   "adjective",
                                          "interjection", "particle",    "symbol", "unknown"};

constexpr std::string_view kClassNames[] = {"interjection", "exclamation", "vulgarity", "mimetic",
                                            "emoticon"};

}  // namespace

Valence valence(Emotion e) {
  switch (e) {
    case Emotion::Gloom:
    case Emotion::Fear:
    case Emotion::Anger:
    case Emotion::Dislike:
      return Valence::Negative;
    case Emotion::Joy:
    case Emotion::Fondness:
    case Emotion::Relief:
      return Valence::Positive;
    case Emotion::Excitement:
    case Emotion::Shame:
    case Emotion::Surprise:
      return Valence::Both;
  }
  return Valence::Both;
}

Activation activation(Emotion e) {
  switch (e) {
    case Emotion::Gloom:
    case Emotion::Relief:
      return Activation::Deactivated;
    case Emotion::Joy:
    case Emotion::Fondness:
    case Emotion::Dislike:
      return Activation::Moderate;
    case Emotion::Shame:
    case Emotion::Excitement:
    case Emotion::Fear:
    case Emotion::Anger:
    case Emotion::Surprise:
      return Activation::Activated;
  }
  return Activation::Moderate;
}

std::string_view emotion_name(Emotion e) { return kEmotionNames[static_cast<int>(e)]; }

std::string_view valence_name(Valence v) {
  switch (v) {
    case Valence::Positive: return "positive";
    case Valence::Negative: return "negative";
    case Valence::Both: return "both";
  }
  return "both";
}

Emotion parse_emotion(std::string_view name) {
  for (int i = 0; i < kEmotionCount; ++i) {
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  }
  throw ValidationError("unknown emotion type '" + std::string(name) + "'");
}

std::vector<Emotion> EmotionSet::to_vector() const {
  std::vector<Emotion> out;
  for (int i = 0; i < kEmotionCount; ++i) {
    if (contains(static_cast<Emotion>(i))) out.push_back(static_cast<Emotion>(i));
  }
  return out;
}

EmotionSet parse_emotion_list(std::string_view list) {
  EmotionSet set;
  if (trim(list).empty()) return set;
  for (const auto& part : split(list, ',')) set.insert(parse_emotion(trim(part)));
  return set;
}

std::string format_emotion_list(EmotionSet set) {
  std::string out;
  for (Emotion e : set.to_vector()) {
    if (!out.empty()) out += ',';
    out += emotion_name(e);
  }
  return out;
}

std::string_view pos_name(Pos p) { return kPosNames[static_cast<int>(p)]; }

Pos parse_pos(std::string_view name) {
  const std::string lowered = ascii_lower(name);
  for (int i = 0; i < 8; ++i) {
    if (kPosNames[i] == lowered) return static_cast<Pos>(i);
  }
  throw ValidationError("unknown part of speech '" + std::string(name) + "'");
}

std::string_view emoteme_class_name(EmotemeClass c) { return kClassNames[static_cast<int>(c)]; }

EmotemeClass parse_emoteme_class(std::string_view name) {
  const std::string lowered = ascii_lower(name);
  for (int i = 0; i < 5; ++i) {
    if (kClassNames[i] == lowered) return static_cast<EmotemeClass>(i);
  }
  throw ValidationError("unknown emoteme class '" + std::string(name) + "'");
}

std::string_view area_name(Area a) {
  switch (a) {
    case Area::Eyes: return "eyes";
    case Area::Mouth: return "mouth";
    case Area::Other: return "other";
  }
  return "other";
}

bool EmotemeEntry::matches(std::string_view word) const {
  if (!repeat_final) return word == surface;
  if (surface.empty() || word.size() < surface.size()) return false;
  if (word.substr(0, surface.size()) != surface) return false;
  const char last = surface.back();
  for (std::size_t i = surface.size(); i < word.size(); ++i) {
    if (word[i] != last) return false;
  }
  return true;
}

namespace {

struct Row {
  std::size_t line;
  std::vector<std::string> cols;
};

std::vector<Row> parse_tsv(std::string_view contents) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    Row row{line_no, split(line, '\t')};
    for (auto& c : row.cols) c = std::string(trim(c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rethrows validation failures with file and line context.
template <typename Fn>
void for_each_row(std::string_view file, std::string_view contents, std::size_t min_cols, Fn&& fn) {
  for (const auto& row : parse_tsv(contents)) {
    const std::string where = std::string(file) + ":" + std::to_string(row.line) + ": ";
    if (row.cols.size() < min_cols) {
      throw ValidationError(where + "expected at least " + std::to_string(min_cols) + " columns");
    }
    try {
      fn(row.cols);
    } catch (const ValidationError& ex) {
      throw ValidationError(where + ex.what());
    }
  }
}

std::uint64_t parse_count(std::string_view s) {
  if (s.empty()) return 0;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ValidationError("invalid count '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

void LexiconBundle::reindex() {
  vulgarity_by_canonical_.clear();
  vulgarity_by_surface_.clear();
  emoticon_by_raw_.clear();
  for (std::size_t i = 0; i < vulgarities_.size(); ++i) {
    const auto& v = vulgarities_[i];
    if (!vulgarity_by_canonical_.emplace(v.canonical, i).second) {
      throw ConflictError("duplicate vulgarity canonical '" + v.canonical + "'");
    }
  }
  // Canonicals first so a variant spelled like another canonical never
  // shadows it.
  for (std::size_t i = 0; i < vulgarities_.size(); ++i) {
    vulgarity_by_surface_.emplace(ascii_lower(vulgarities_[i].canonical), i);
  }
  for (std::size_t i = 0; i < vulgarities_.size(); ++i) {
    vulgarity_by_surface_.emplace(ascii_lower(vulgarities_[i].reading), i);
    for (const auto& var : vulgarities_[i].variants) vulgarity_by_surface_.emplace(ascii_lower(var), i);
  }
  for (std::size_t i = 0; i < emoticons_.size(); ++i) emoticon_by_raw_.emplace(emoticons_[i].raw, i);
}

const VulgarityEntry* LexiconBundle::find_vulgarity(std::string_view canonical) const {
  const auto it = vulgarity_by_canonical_.find(canonical);
  return it == vulgarity_by_canonical_.end() ? nullptr : &vulgarities_[it->second];
}

const VulgarityEntry* LexiconBundle::vulgarity_for_surface(std::string_view surface) const {
  const auto it = vulgarity_by_surface_.find(ascii_lower(surface));
  return it == vulgarity_by_surface_.end() ? nullptr : &vulgarities_[it->second];
}

const EmoticonRecord* LexiconBundle::find_emoticon(std::string_view raw) const {
  const auto it = emoticon_by_raw_.find(raw);
  return it == emoticon_by_raw_.end() ? nullptr : &emoticons_[it->second];
}

std::vector<const AreaGlyph*> LexiconBundle::find_glyph(char32_t glyph) const {
  std::vector<const AreaGlyph*> out;
  for (const auto& a : areas_) {
    if (a.glyph == glyph) out.push_back(&a);
  }
  return out;
}

bool LexiconBundle::is_area_glyph(char32_t glyph) const {
  for (const auto& a : areas_) {
    if (a.glyph == glyph && a.area != Area::Other) return true;
  }
  return false;
}

LexiconBundle LexiconBundle::from_sources(const LexiconSources& src) {
  LexiconBundle b;

  for_each_row("emotemes.tsv", src.emotemes, 2, [&](const std::vector<std::string>& c) {
    EmotemeEntry e;
    std::string surface = ascii_lower(c[0]);
    if (surface.size() > 1 && surface.back() == '+') {
      surface.pop_back();
      e.repeat_final = true;
    }
    if (surface.empty()) throw ValidationError("empty emoteme surface");
    e.surface = std::move(surface);
    e.cls = parse_emoteme_class(c[1]);
    if (c.size() > 2 && !c[2].empty()) e.pos = parse_pos(c[2]);
    b.emotemes_.push_back(std::move(e));
  });

  std::set<std::pair<std::string, Emotion>> seen_expr;
  for_each_row("expressions.tsv", src.expressions, 2, [&](const std::vector<std::string>& c) {
    EmotiveExpressionEntry e;
    e.lemma = ascii_lower(c[0]);
    if (e.lemma.empty()) throw ValidationError("empty lemma");
    e.emotion = parse_emotion(c[1]);
    if (c.size() > 2 && !c[2].empty()) e.pos = parse_pos(c[2]);
    if (!seen_expr.emplace(e.lemma, e.emotion).second) {
      throw ValidationError("duplicate expression '" + e.lemma + "' for " +
                            std::string(emotion_name(e.emotion)));
    }
    b.expressions_.push_back(std::move(e));
  });

  for_each_row("cvs.tsv", src.cvs, 1, [&](const std::vector<std::string>& c) {
    CvsPattern p;
    p.pattern = ascii_lower(c[0]);
    if (p.pattern.empty()) throw ValidationError("empty CVS pattern");
    if (c.size() > 1 && !c[1].empty() && ascii_lower(c[1]) != "negation") {
      throw ValidationError("unsupported CVS kind '" + c[1] + "'");
    }
    b.cvs_.push_back(std::move(p));
  });

  for_each_row("vulgarities.tsv", src.vulgarities, 3, [&](const std::vector<std::string>& c) {
    VulgarityEntry v;
    v.canonical = c[0];
    v.pos = parse_pos(c[1]);
    v.reading = ascii_lower(c[2]);
    if (v.canonical.empty()) throw ValidationError("empty canonical");
    if (v.reading.empty()) throw ValidationError("empty reading for '" + v.canonical + "'");
    if (c.size() > 3) v.hit_rate = parse_count(c[3]);
    if (c.size() > 4 && !c[4].empty()) {
      for (const auto& var : split(c[4], ',')) {
        if (!trim(var).empty()) v.variants.emplace_back(trim(var));
      }
    }
    for (const auto& prior : b.vulgarities_) {
      if (prior.canonical == v.canonical) {
        throw ValidationError("duplicate vulgarity canonical '" + v.canonical + "'");
      }
    }
    b.vulgarities_.push_back(std::move(v));
  });

  for_each_row("emoticons.tsv", src.emoticons, 2, [&](const std::vector<std::string>& c) {
    EmoticonRecord r;
    r.raw = c[0];
    r.emotions = parse_emotion_list(c[1]);
    if (r.raw.empty()) throw ValidationError("empty emoticon");
    if (r.emotions.empty()) throw ValidationError("emoticon '" + r.raw + "' has no emotions");
    for (const auto& prior : b.emoticons_) {
      if (prior.raw == r.raw) throw ValidationError("duplicate emoticon '" + r.raw + "'");
    }
    b.emoticons_.push_back(std::move(r));
  });

  for_each_row("areas.tsv", src.areas, 2, [&](const std::vector<std::string>& c) {
    const auto cps = to_u32(c[0]);
    if (cps.size() != 1) throw ValidationError("area glyph must be a single character: '" + c[0] + "'");
    AreaGlyph g;
    g.glyph = cps[0];
    const std::string area = ascii_lower(c[1]);
    if (area == "eyes") {
      g.area = Area::Eyes;
    } else if (area == "mouth") {
      g.area = Area::Mouth;
    } else if (area == "other") {
      g.area = Area::Other;
    } else {
      throw ValidationError("unknown area '" + c[1] + "'");
    }
    if (c.size() > 2) g.emotions = parse_emotion_list(c[2]);
    if (g.area != Area::Other && g.emotions.empty()) {
      throw ValidationError("eye/mouth glyph '" + c[0] + "' needs at least one emotion");
    }
    b.areas_.push_back(g);
  });

  if (src.words) {
    for_each_row("words.tsv", *src.words, 2, [&](const std::vector<std::string>& c) {
      BaseWord w;
      w.surface = c[0];
      w.pos = parse_pos(c[1]);
      w.reading = c.size() > 2 ? ascii_lower(c[2]) : std::string();
      if (w.surface.empty()) throw ValidationError("empty word surface");
      b.base_words_.push_back(std::move(w));
    });
  }

  if (src.romanize) {
    for_each_row("romanize.tsv", *src.romanize, 2, [&](const std::vector<std::string>& c) {
      if (c[0].empty()) throw ValidationError("empty kana key");
      b.romanization_.push_back({c[0], c[1]});
    });
  }

  if (b.vulgarities_.empty()) b.warnings_.emplace_back("vulgarities.tsv: no entries");
  if (b.emotemes_.empty()) b.warnings_.emplace_back("emotemes.tsv: no entries");
  if (b.expressions_.empty()) b.warnings_.emplace_back("expressions.tsv: no entries");
  b.reindex();
  return b;
}

LexiconBundle LexiconBundle::register_vulgarity(VulgarityEntry entry) const {
  if (entry.canonical.empty()) throw ValidationError("empty canonical");
  if (find_vulgarity(entry.canonical)) {
    throw ConflictError("vulgarity '" + entry.canonical + "' is already registered");
  }
  if (entry.reading.empty()) throw ValidationError("empty reading for '" + entry.canonical + "'");
  entry.reading = ascii_lower(entry.reading);
  LexiconBundle next = *this;
  next.vulgarities_.push_back(std::move(entry));
  std::erase(next.warnings_, std::string("vulgarities.tsv: no entries"));
  next.reindex();
  return next;
}

LexiconBundle register_vulgarity(const LexiconBundle& bundle, VulgarityEntry entry) {
  return bundle.register_vulgarity(std::move(entry));
}

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path, bool required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (required) throw IoError("missing lexicon file '" + path.filename().string() + "' in " + path.parent_path().string());
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

LexiconBundle load_lexicons(const std::filesystem::path& dir) {
  LexiconSources src;
  src.emotemes = *read_file(dir / "emotemes.tsv", true);
  src.expressions = *read_file(dir / "expressions.tsv", true);
  src.cvs = *read_file(dir / "cvs.tsv", true);
  src.vulgarities = *read_file(dir / "vulgarities.tsv", true);
  src.emoticons = *read_file(dir / "emoticons.tsv", true);
  src.areas = *read_file(dir / "areas.tsv", true);
  src.words = read_file(dir / "words.tsv", false);
  src.romanize = read_file(dir / "romanize.tsv", false);
  return LexiconBundle::from_sources(src);
}

}  // namespace patrol
