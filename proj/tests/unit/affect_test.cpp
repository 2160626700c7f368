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

#include "patrol/affect.hpp"
#include "patrol/error.hpp"
#include "support.hpp"

using namespace patrol;

namespace {

const AffectAnalyzer& affect() { return testing::shipped().affect(); }

bool has_source(const AffectResult& r, EmotemeSource s) {
  for (const auto& e : r.emotemes)
    if (e.source == s) return true;
  return false;
}

}  // namespace

TEST_CASE("flip table") {
  const auto t = FlipTable::standard();
  CHECK(t.targets(Emotion::Dislike) == EmotionSet{Emotion::Joy, Emotion::Fondness});
  CHECK(t.targets(Emotion::Joy) == EmotionSet{Emotion::Dislike});
  CHECK(t.targets(Emotion::Shame) == EmotionSet{Emotion::Shame});
  CHECK(t.flip({Emotion::Fear, Emotion::Anger}) == EmotionSet{Emotion::Relief});
  for (int i = 0; i < kEmotionCount; ++i) CHECK_FALSE(t.targets(static_cast<Emotion>(i)).empty());
  auto custom = t;
  CHECK_THROWS_AS(custom.set(Emotion::Joy, {}), ValidationError);
  custom.set(Emotion::Joy, {Emotion::Gloom});
  CHECK(custom.targets(Emotion::Joy) == EmotionSet{Emotion::Gloom});
}

TEST_CASE("non-emotive text skips expression analysis") {
  const auto r = affect().analyze("kyou wa suki");
  CHECK_FALSE(r.emotive);
  CHECK(r.emotive_value == 0);
  CHECK(r.expressions.empty());
  CHECK(r.emotions().empty());
}

TEST_CASE("emoteme sources") {
  CHECK(has_source(affect().analyze("sugoi !!!"), EmotemeSource::ExclamationMark));
  CHECK(has_source(affect().analyze("sou ..."), EmotemeSource::Ellipsis));
  CHECK(has_source(affect().analyze("sou …"), EmotemeSource::Ellipsis));
  CHECK(has_source(affect().analyze("ii ~~~"), EmotemeSource::Prolongation));
  CHECK(has_source(affect().analyze("aitsu kimoi"), EmotemeSource::Vulgarity));
  CHECK(has_source(affect().analyze("sugoi ne"), EmotemeSource::Particle));
  CHECK_FALSE(has_source(affect().analyze("ne sugoi"), EmotemeSource::Particle));
  CHECK(has_source(affect().analyze("yatta ^o^"), EmotemeSource::Emoticon));
}

TEST_CASE("emotive value counts emotemes up to the cap") {
  std::string text = "kyou";
  for (int n = 1; n <= 9; ++n) {
    text += " !";
    const auto r = affect().analyze(text);
    CHECK(r.emotive_value == std::min<int>(kEmotiveValueCap, static_cast<int>(r.emotemes.size())));
    CHECK(r.emotive);
  }
}

TEST_CASE("emotemes do not overlap") {
  const auto r = affect().analyze("Iya~, sore wa sugoi desu ne- ! ^o^ ... kimoooi !!!");
  for (std::size_t i = 0; i < r.emotemes.size(); ++i)
    for (std::size_t j = i + 1; j < r.emotemes.size(); ++j) CHECK_FALSE(r.emotemes[i].span.overlaps(r.emotemes[j].span));
}

TEST_CASE("negation flips within the window only") {
  const auto toks = testing::shipped().tokenize("nai");
  auto o = affect().apply_cvs(Emotion::Dislike, toks);
  CHECK(o.shifted);
  CHECK(o.applications == 1);
  CHECK(o.emotions == EmotionSet{Emotion::Joy, Emotion::Fondness});

  const auto far = testing::shipped().tokenize("sore wa kyou no nai");
  o = affect().apply_cvs(Emotion::Dislike, far);
  CHECK_FALSE(o.shifted);
  CHECK(o.emotions == EmotionSet{Emotion::Dislike});
}

TEST_CASE("stacked negations flip twice") {
  const auto toks = testing::shipped().tokenize("nai nai");
  const auto o = affect().apply_cvs(Emotion::Joy, toks);
  CHECK(o.applications == 2);
  CHECK(o.emotions == FlipTable::standard().flip(FlipTable::standard().flip({Emotion::Joy})));
}

TEST_CASE("shifted expression reports its origin") {
  const auto r = affect().analyze("Akirame cha ikenai yo !");
  REQUIRE_FALSE(r.expressions.empty());
  bool found = false;
  for (const auto& e : r.expressions) {
    if (!e.shifted) continue;
    found = true;
    CHECK(e.original == Emotion::Dislike);
    CHECK_FALSE(e.cvs_pattern.empty());
    CHECK(e.cvs_span.start > e.span.start);
  }
  CHECK(found);
  bool cvs_span = false;
  for (const auto& s : r.spans()) cvs_span |= s.kind == "cvs";
  CHECK(cvs_span);
}

TEST_CASE("longer lemmas win") {
  const auto r = affect().analyze("Hitoribocchi nante iya da ~~~");
  bool iya_da = false;
  for (const auto& e : r.expressions) iya_da |= e.lemma == "iya da";
  CHECK(iya_da);
}

TEST_CASE("prolonged and ellipsis spans in a quoted post") {
  const std::string text = "Shinde kureee , daibu kiraware-mono de yuumei , subete ga itaitashii ...";
  const auto r = affect().analyze(text);
  CHECK(has_source(r, EmotemeSource::Prolongation));
  CHECK(has_source(r, EmotemeSource::Ellipsis));
  CHECK(has_source(r, EmotemeSource::Vulgarity));
  const auto ex = r.expression_emotions();
  CHECK(ex.contains(Emotion::Dislike));
  CHECK(ex.contains(Emotion::Gloom));
}
