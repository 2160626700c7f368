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

#include <doctest.h>

#include <fstream>

#include "patrol/error.hpp"
#include "patrol/lexicons.hpp"
#include "patrol/tokenizer.hpp"
#include "support.hpp"

using namespace patrol;

namespace {

LexiconSources tiny() {
  LexiconSources s;
  s.emotemes = "sugee+\tinterjection\norz\temoticon\n";
  s.expressions = "suki\tfondness\tadjective\niya da\tdislike\n";
  s.cvs = "nai\n";
  s.vulgarities = "# comment\nkimoi\tadjective\tkimoi\t294\tkimosu, キモい\n";
  s.emoticons = "^o^\tjoy\n";
  s.areas = "^\teyes\tjoy\no\tmouth\tjoy,surprise\n";
  return s;
}

}  // namespace

TEST_CASE("bundles parse from in-memory sources") {
  const auto b = LexiconBundle::from_sources(tiny());
  REQUIRE(b.vulgarities().size() == 1);
  const auto& v = b.vulgarities()[0];
  CHECK(v.hit_rate == 294);
  CHECK(v.variants == std::vector<std::string>{"kimosu", "キモい"});
  CHECK(b.vulgarity_for_surface("KIMOSU") == &v);
  CHECK(b.vulgarity_for_surface("キモい") == &v);
  CHECK(b.vulgarity_for_surface("kimo") == nullptr);
  CHECK(b.expressions()[1].lemma == "iya da");
  CHECK(b.find_emoticon("^o^")->emotions == EmotionSet{Emotion::Joy});
  CHECK(b.find_glyph(U'o').size() == 1);
  CHECK(b.is_area_glyph(U'^'));

  const auto& sugee = b.emotemes()[0];
  CHECK(sugee.repeat_final);
  CHECK(sugee.matches("sugee"));
  CHECK(sugee.matches("sugeeee"));
  CHECK_FALSE(sugee.matches("suge"));
  CHECK_FALSE(sugee.matches("sugeex"));
}

TEST_CASE("bad lexicon rows are rejected") {
  auto s = tiny();
  s.expressions = "suki\tlove\n";
  CHECK_THROWS_AS(LexiconBundle::from_sources(s), ValidationError);
  s = tiny();
  s.vulgarities += "kimoi\tadjective\tkimoi\n";
  CHECK_THROWS_WITH_AS(LexiconBundle::from_sources(s), doctest::Contains("vulgarities.tsv:3"), ValidationError);
  s = tiny();
  s.areas = "^^\teyes\tjoy\n";
  CHECK_THROWS_AS(LexiconBundle::from_sources(s), ValidationError);
  s = tiny();
  s.emoticons = "^o^\n";
  CHECK_THROWS_AS(LexiconBundle::from_sources(s), ValidationError);
  s = tiny();
  s.vulgarities = "uzai\tadjective\tuzai\tlots\n";
  CHECK_THROWS_AS(LexiconBundle::from_sources(s), ValidationError);
}

TEST_CASE("registering vulgarities returns a new bundle") {
  const auto b = LexiconBundle::from_sources(tiny());
  VulgarityEntry e;
  e.canonical = "uzai";
  e.reading = "uzai";
  e.variants = {"uzee"};
  const auto b2 = register_vulgarity(b, e);
  CHECK(b.vulgarities().size() == 1);
  CHECK(b2.vulgarities().size() == 2);
  CHECK(b2.vulgarity_for_surface("uzee")->canonical == "uzai");
  CHECK_THROWS_AS(register_vulgarity(b2, e), ConflictError);
  e.canonical = "x";
  e.reading = "";
  CHECK_THROWS_AS(register_vulgarity(b, e), ValidationError);
}

TEST_CASE("missing required lexicon file is an io error") {
  testing::TempDir dir("lex");
  std::ofstream(dir.path() / "emotemes.tsv") << "orz\temoticon\n";
  try {
    load_lexicons(dir.path());
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(".tsv") != std::string::npos);
  }
}

TEST_CASE("shipped lexicons load cleanly") {
  const auto& b = testing::shipped().bundle();
  CHECK(b.warnings().empty());
  CHECK(b.vulgarities().size() >= 30);
  CHECK(b.find_vulgarity("kimoi") != nullptr);
  EmotionSet all;
  for (const auto& e : b.expressions()) all.insert(e.emotion);
  CHECK(all.size() == kEmotionCount);
}

TEST_CASE("shipped romanization table equals the built-in one") {
  const auto b = load_lexicons(testing::kData / "lexicons");
  const auto builtin = Romanizer::standard_rules();
  REQUIRE(b.romanization().size() == builtin.size());
  for (std::size_t i = 0; i < builtin.size(); ++i) {
    CHECK(b.romanization()[i].kana == builtin[i].kana);
    CHECK(b.romanization()[i].latin == builtin[i].latin);
  }
}

TEST_CASE("emotion taxonomy") {
  CHECK(parse_emotion("gloom") == Emotion::Gloom);
  CHECK_THROWS_AS(parse_emotion("Gloom"), ValidationError);
  CHECK(valence(Emotion::Joy) == Valence::Positive);
  CHECK(valence(Emotion::Dislike) == Valence::Negative);
  CHECK(parse_emotion_list("") == EmotionSet{});
  const auto s = parse_emotion_list("joy,surprise");
  CHECK(s.size() == 2);
  CHECK(parse_emotion_list(format_emotion_list(s)) == s);
  CHECK(EmotionSet{Emotion::Joy}.is_subset_of(s));
}
