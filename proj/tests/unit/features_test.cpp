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

#include <cmath>

#include "patrol/error.hpp"
#include "patrol/features.hpp"

using namespace patrol;

namespace {

Token tok(const std::string& s, Pos p = Pos::Noun) {
  Token t;
  t.surface = s;
  t.pos = p;
  t.end = s.size();
  return t;
}

// d1 = "A a b", d2 = "b c": cf a=2 b=2 c=1, df a=1 b=2 c=1, 2 entries.
const std::vector<std::vector<Token>>& docs() {
  static const std::vector<std::vector<Token>> d = {
      {tok("A"), tok("a", Pos::Verb), tok("b")},
      {tok("b"), tok("c", Pos::Adjective)},
  };
  return d;
}

FeatureConfig cfg(MainFeature m, Weighting w, bool raw_tf = false) {
  FeatureConfig c;
  c.main = m;
  c.weighting = w;
  c.raw_tf = raw_tf;
  return c;
}

}  // namespace

TEST_CASE("feature keys") {
  const Token t = tok("Kimoi", Pos::Adjective);
  CHECK(feature_key(t, MainFeature::WordOnly) == "kimoi");
  CHECK(feature_key(t, MainFeature::WordPos) == "kimoi\tadjective");
  CHECK(feature_key(t, MainFeature::PosOnly) == "adjective");
}

TEST_CASE("vocabulary statistics") {
  const auto v = build_vocabulary(docs(), cfg(MainFeature::WordOnly, Weighting::TfIdf));
  REQUIRE(v.size() == 3);
  CHECK(v.key(0) == "a");
  CHECK(v.key(2) == "c");
  CHECK(v.corpus_freq(*v.index_of("a")) == 2);
  CHECK(v.doc_freq(*v.index_of("b")) == 2);
  CHECK(v.total_tokens() == 5);
  CHECK(v.total_entries() == 2);
  CHECK(v.idf(*v.index_of("a")) == doctest::Approx(std::log(3.0)));
  CHECK(v.idf(*v.index_of("b")) == doctest::Approx(std::log(2.0)));
  CHECK(Vocabulary::from_json(v.to_json()) == v);

  const auto wp = build_vocabulary(docs(), cfg(MainFeature::WordPos, Weighting::TfIdf));
  CHECK(wp.size() == 4);
  const auto pos = build_vocabulary(docs(), cfg(MainFeature::PosOnly, Weighting::TfIdf));
  CHECK(pos.size() == 3);
  CHECK(pos.corpus_freq(*pos.index_of("noun")) == 3);
  CHECK_THROWS_AS(build_vocabulary({}, FeatureConfig{}), ValidationError);
}

TEST_CASE("hand-computed weights") {
  const auto& d1 = docs()[0];
  const auto occ = cfg(MainFeature::WordOnly, Weighting::Occurrence);
  const auto v = build_vocabulary(docs(), occ);
  CHECK(weigh("a", d1, v, occ) == doctest::Approx(1.0));
  CHECK(weigh("b", d1, v, occ) == doctest::Approx(0.5));
  CHECK(weigh("c", d1, v, occ) == doctest::Approx(0.0));
  CHECK(weigh("a", d1, v, cfg(MainFeature::WordOnly, Weighting::Occurrence, true)) == doctest::Approx(2.0));
  CHECK(weigh("b", d1, v, cfg(MainFeature::WordOnly, Weighting::Relative)) == doctest::Approx(0.25));
  CHECK(weigh("a", d1, v, cfg(MainFeature::WordOnly, Weighting::Idf)) == doctest::Approx(std::log(3.0)));
  CHECK(weigh("c", d1, v, cfg(MainFeature::WordOnly, Weighting::Idf)) == doctest::Approx(0.0));
  CHECK(weigh("b", d1, v, cfg(MainFeature::WordOnly, Weighting::TfIdf)) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK_THROWS_AS(weigh("zzz", d1, v, occ), ContractError);
}

TEST_CASE("vectors are sparse, sorted and unit length") {
  const auto c = cfg(MainFeature::WordOnly, Weighting::TfIdf);
  const auto v = build_vocabulary(docs(), c);
  const auto x = vectorize(docs()[0], v, c);
  REQUIRE(x.items.size() == 2);
  CHECK(x.items[0].first < x.items[1].first);
  CHECK(x.squared_norm() == doctest::Approx(1.0));
  const double a = std::log(3.0), b = 0.5 * std::log(2.0);
  CHECK(x.items[0].second == doctest::Approx(a / std::sqrt(a * a + b * b)));

  auto raw = c;
  raw.l2_normalize = false;
  const auto y = vectorize(docs()[0], v, raw);
  CHECK(y.items[1].second == doctest::Approx(b));
  CHECK(y.dot({1.0, 1.0, 1.0}) == doctest::Approx(a + b));

  CHECK(vectorize({tok("unseen")}, v, c).empty());
}

TEST_CASE("feature grid and names") {
  const auto g = FeatureConfig::grid();
  REQUIRE(g.size() == 12);
  CHECK(g.front().main == MainFeature::WordPos);
  CHECK(g.front().weighting == Weighting::Occurrence);
  CHECK(g.back().main == MainFeature::PosOnly);
  CHECK(FeatureConfig{}.name() == "word/tfidf");
  for (const auto& c : g) CHECK(feature_config_from_json(to_json(c)) == c);
  CHECK(parse_main_feature("pos") == MainFeature::PosOnly);
  CHECK(parse_weighting("rel") == Weighting::Relative);
  CHECK_THROWS_AS(parse_weighting("bm25"), ValidationError);
}
