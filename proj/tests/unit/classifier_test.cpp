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
#include <random>

#include "patrol/classifier.hpp"
#include "patrol/error.hpp"
#include "support.hpp"

using namespace patrol;

namespace {

struct Points {
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
};

// Noisy 3-D data; not separable.
Points noisy(std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Points p;
  for (int i = 0; i < 120; ++i) {
    const int y = i % 2 ? 1 : -1;
    FeatureVector x;
    for (std::uint32_t j = 0; j < 3; ++j) x.items.emplace_back(j, scale * (g(rng) + (j == 0 ? 0.8 * y : 0.0)));
    p.xs.push_back(x);
    p.ys.push_back(y);
  }
  return p;
}

double primal(const LinearSvm& m, const Points& p) {
  double r = m.bias * m.bias / (m.hyper.bias_term * m.hyper.bias_term);
  for (double w : m.weights) r += w * w;
  double h = 0.0;
  for (std::size_t i = 0; i < p.xs.size(); ++i) h += std::max(0.0, 1.0 - p.ys[i] * m.decision(p.xs[i]));
  return 0.5 * r + m.hyper.C * h;
}

const RulePatternSet& rules() {
  static const RulePatternSet r = RulePatternSet::load(testing::kData / "lexicons" / "rules.tsv");
  return r;
}

}  // namespace

TEST_CASE("reported objective is the primal of the returned weights") {
  for (double c : {0.1, 1.0, 10.0}) {
    const auto p = noisy(1);
    SvmHyper h;
    h.C = c;
    const auto m = train_linear_svm(p.xs, p.ys, 3, h);
    CHECK(m.meta.objective == doctest::Approx(primal(m, p)).epsilon(1e-12));
    CHECK(m.meta.converged);
    // Weak duality.
    CHECK(m.meta.dual_objective <= m.meta.objective + 1e-9);
    CHECK(m.meta.objective - m.meta.dual_objective < 1e-3 * std::max(1.0, m.meta.objective));
  }
}

TEST_CASE("rescaling inputs with C/s^2 and bias_term*s gives the same classifier") {
  const double s = 4.0;
  const auto p = noisy(2), q = noisy(2, s);
  SvmHyper h;
  h.C = 2.0;
  h.tolerance = 1e-10;
  h.max_epochs = 20000;
  SvmHyper hs = h;
  hs.C = h.C / (s * s);
  hs.bias_term = h.bias_term * s;
  const auto a = train_linear_svm(p.xs, p.ys, 3, h);
  const auto b = train_linear_svm(q.xs, q.ys, 3, hs);
  CHECK(b.meta.objective == doctest::Approx(a.meta.objective / (s * s)).epsilon(1e-4));
  for (std::size_t j = 0; j < 3; ++j) CHECK(b.weights[j] * s == doctest::Approx(a.weights[j]).epsilon(1e-3));
  CHECK(b.bias == doctest::Approx(a.bias).epsilon(1e-3));
}

TEST_CASE("training is deterministic and validates input") {
  const auto p = noisy(3);
  const auto a = train_linear_svm(p.xs, p.ys, 3), b = train_linear_svm(p.xs, p.ys, 3);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK_THROWS_AS(train_linear_svm(p.xs, std::vector<int>(p.xs.size(), 1), 3), ValidationError);
  CHECK_THROWS_AS(train_linear_svm(p.xs, {1, -1}, 3), ValidationError);
  SvmHyper bad;
  bad.C = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("a zero score is non-harmful") {
  SvmModel m;
  m.svm.weights = {0.0};
  CHECK_FALSE(predict(m, FeatureVector{}).harmful);
  m.svm.bias = 1e-9;
  CHECK(predict(m, FeatureVector{}).harmful);
}

TEST_CASE("models round-trip through json") {
  const auto& pl = testing::shipped();
  const Dataset d = load_dataset(testing::kData / "synthetic" / "corpus.jsonl");
  const auto model = train_svm(d, pl);
  testing::TempDir dir("model");
  save_model(model, dir.path() / "m.json");
  const auto back = load_model(dir.path() / "m.json");
  CHECK(back.vocab == model.vocab);
  CHECK(back.features == model.features);
  for (const auto& e : d.entries()) {
    const auto t = pl.tokenize(e.text);
    CHECK(predict(back, t).score == predict(model, t).score);
  }
  auto j = model_to_json(model);
  j["version"] = 99;
  CHECK_THROWS_AS(model_from_json(j), ValidationError);
  CHECK_THROWS_AS(load_model(dir.path() / "absent.json"), IoError);
}

TEST_CASE("rule patterns parse and reject bad rows") {
  CHECK(rules().size() >= 10);
  CHECK_THROWS_AS(RulePatternSet::parse("a\tquarrel\tx\n"), ValidationError);
  CHECK_THROWS_AS(RulePatternSet::parse("a\tquarrel\tx\tN\n"), ValidationError);
  CHECK_THROWS_AS(RulePatternSet::parse("a\tgossip\tx\tD\n"), ValidationError);
  CHECK_THROWS_AS(RulePatternSet::parse("a\tquarrel\t(\tD\n"), ValidationError);
  CHECK_THROWS_AS(RulePatternSet::parse("a\tquarrel\tx\tD\na\tquarrel\ty\tD\n"), ConflictError);
  const auto ok = RulePatternSet::parse("a\tquarrel\tHELLO\tD\ti\n");
  CHECK(ok.patterns()[0].ignore_case);
}

TEST_CASE("rule screen") {
  const auto& pl = testing::shipped();
  auto r = rule_screen(Entry{"1", "Tanaka-san tte yasashii", {}, {}, {}}, rules(), pl);
  CHECK(r.label == TriLabel::Harmful);
  REQUIRE_FALSE(r.triggers.empty());
  CHECK(r.triggers[0].rule_id == "name.honorific");
  CHECK(r.triggers[0].span == Span{0, 10});

  r = rule_screen(Entry{"2", ">>12 sou da ne", {}, {}, {}}, rules(), pl);
  CHECK(r.label == TriLabel::Doubtful);

  r = rule_screen(Entry{"3", "aitsu kimoooi", {}, {}, {}}, rules(), pl);
  CHECK(r.label == TriLabel::Doubtful);
  REQUIRE(r.triggers.size() == 1);
  CHECK(r.triggers[0].rule_id == kVulgarityRuleId);

  r = rule_screen(Entry{"4", "DARE ga suki nano ?", {}, {}, {}}, rules(), pl);
  CHECK(r.label == TriLabel::Harmful);

  r = rule_screen(Entry{"5", "kyou no shiai wa tanoshii ne", {}, {}, {}}, rules(), pl);
  CHECK(r.label == TriLabel::Normal);
  CHECK(r.triggers.empty());
}

TEST_CASE("appending text never lowers the rule label") {
  const auto& pl = testing::shipped();
  const std::vector<std::string> parts = {"kyou", "Tanaka-kun", ">>3", "kimoi", "shiai", "0120-444-444", "wa", "3-nen 2-kumi"};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    std::string text = parts[rng() % parts.size()];
    TriLabel prev = rule_screen(Entry{"x", text, {}, {}, {}}, rules(), pl).label;
    for (int k = 0; k < 4; ++k) {
      text += " " + parts[rng() % parts.size()];
      const TriLabel now = rule_screen(Entry{"x", text, {}, {}, {}}, rules(), pl).label;
      CHECK(severity(now) >= severity(prev));
      prev = now;
    }
  }
}

TEST_CASE("fusion matrix") {
  const auto f = FusionMatrix::standard();
  CHECK(f.fuse(TriLabel::Normal, false) == TriLabel::Normal);
  CHECK(f.fuse(TriLabel::Normal, true) == TriLabel::Doubtful);
  CHECK(f.fuse(TriLabel::Doubtful, false) == TriLabel::Doubtful);
  CHECK(f.fuse(TriLabel::Doubtful, true) == TriLabel::Harmful);
  CHECK(f.fuse(TriLabel::Harmful, false) == TriLabel::Harmful);
  const auto j = f.to_json();
  CHECK(j["N"] == nlohmann::json::array({"N", "D"}));
  const auto g = FusionMatrix::from_json(j);
  for (auto l : {TriLabel::Normal, TriLabel::Doubtful, TriLabel::Harmful})
    for (bool s : {false, true}) CHECK(g.fuse(l, s) == f.fuse(l, s));
  CHECK_THROWS_AS(FusionMatrix::from_json({{"N", {"N"}}}), ValidationError);
}

TEST_CASE("classification fuses rules and svm") {
  const auto& pl = testing::shipped();
  const Dataset d = load_dataset(testing::kData / "synthetic" / "corpus.jsonl");
  const auto model = train_svm(d, pl);
  const auto c = classify_entry(Entry{"x", "Suzuki-san maji kimoi shine", {}, {}, {}}, model, rules(), pl);
  CHECK(c.final == TriLabel::Harmful);
  const auto n = classify_entry(Entry{"y", "ashita no shiai ganbarou ne !", {}, {}, {}}, model, rules(), pl);
  CHECK(n.final == TriLabel::Normal);
  CHECK(n.svm.score < 0);
}
