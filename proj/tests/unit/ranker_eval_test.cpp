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

#include "patrol/error.hpp"
#include "patrol/evalkit.hpp"
#include "patrol/ranker.hpp"
#include "support.hpp"

using namespace patrol;

namespace {

std::vector<std::vector<Token>> tok_all(const std::vector<std::string>& texts) {
  std::vector<std::vector<Token>> out;
  for (const auto& t : texts) out.push_back(testing::shipped().tokenize(t));
  return out;
}

// 8 tokens: baka x2 + kimoi in one entry, kimoi + shine in another.
const std::vector<std::string> kSmall = {"baka baka kimoi", "kimoi shine", "kyou wa ii"};

}  // namespace

TEST_CASE("raw co-occurrence counts") {
  const auto t = build_cooccurrence(tok_all(kSmall), testing::shipped(), DedupMode::Raw);
  CHECK(t.total_words() == 8);
  CHECK(t.word_count("baka") == 2);
  CHECK(t.word_count("kimoi") == 2);
  CHECK(t.word_count("shine") == 1);
  CHECK(t.pair_count("baka", "baka") == 2);
  CHECK(t.pair_count("kimoi", "baka") == 1);
  CHECK(t.pair_count("kimoi", "kimoi") == 0);
  CHECK(t_score(make_pair_key("baka", "kimoi"), t) == doctest::Approx(0.5));
  CHECK(t_score(make_pair_key("baka", "baka"), t) == doctest::Approx(1.5 / std::sqrt(2.0)));

  const auto r = score_entry("e1", testing::shipped().tokenize(kSmall[0]), t, testing::shipped());
  CHECK(r.contributions.size() == 2);
  CHECK(r.total == doctest::Approx(0.5 + 1.5 / std::sqrt(2.0)));
}

TEST_CASE("deduplicated counts use document frequency") {
  const auto t = build_cooccurrence(tok_all(kSmall), testing::shipped(), DedupMode::DedupPerEntry);
  CHECK(t.word_count("baka") == 1);
  CHECK(t.word_count("kimoi") == 2);
  CHECK(t.pair_count("baka", "baka") == 1);
  CHECK(t.pair_count("kimoi", "kimoi") == 2);
  CHECK(t_score(make_pair_key("kimoi", "shine"), t) == doctest::Approx(0.75));
}

TEST_CASE("similarity mode merges spelling variants") {
  const std::vector<std::string> texts = {"kimoi shine", "kimosu shine", "kimoooi shine", "kyou wa"};
  const auto sim = build_cooccurrence(tok_all(texts), testing::shipped(), DedupMode::DedupPlusSimilarity);
  const auto dedup = build_cooccurrence(tok_all(texts), testing::shipped(), DedupMode::DedupPerEntry);
  CHECK(sim.pair_count("kimoi", "shine") == 3);
  CHECK(dedup.pair_count("kimoi", "shine") == 1);
  CHECK(dedup.pair_count("kimosu", "shine") == 1);
  // n = 8, c = 3, occ = 3 and 3.
  CHECK(t_score(make_pair_key("kimoi", "shine"), sim) == doctest::Approx((3.0 - 9.0 / 8.0) / std::sqrt(3.0)));
}

TEST_CASE("similarity pair counts dominate per-variant counts") {
  std::mt19937_64 rng(21);
  const std::vector<std::string> words = {"kimoi", "kimosu", "kishoi", "kimoooi", "shine", "shinee", "uzai", "uzee",
                                          "kyou", "wa", "baka"};
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> texts;
    for (int i = 0; i < 12; ++i) {
      std::string t;
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int k = 0; k < n; ++k) t += words[rng() % words.size()] + " ";
      texts.push_back(t);
    }
    const auto docs = tok_all(texts);
    const auto sim = build_cooccurrence(docs, testing::shipped(), DedupMode::DedupPlusSimilarity);
    const auto dedup = build_cooccurrence(docs, testing::shipped(), DedupMode::DedupPerEntry);
    for (const auto& [pair, count] : dedup.pairs()) {
      const auto canon = [](const std::string& w) {
        const auto* v = testing::shipped().bundle().vulgarity_for_surface(w);
        return v ? v->canonical : w;
      };
      CHECK(sim.pair_count(canon(pair.first), canon(pair.second)) >= count);
    }
    CHECK(sim.total_words() == dedup.total_words());
  }
}

TEST_CASE("t-score domain") {
  CHECK_THROWS_AS(t_score(0, 1, 1, 10), DomainError);
  CHECK_THROWS_AS(t_score(1, 1, 1, 0), DomainError);
  CHECK(t_score(4, 0, 0, 10) == doctest::Approx(2.0));
  const auto t = CooccurrenceTable::from_counts(DedupMode::Raw, 100, {{"a", 10}, {"b", 10}}, {{make_pair_key("b", "a"), 4}});
  CHECK(t_score(make_pair_key("a", "b"), t) == doctest::Approx((4.0 - 1.0) / 2.0));
}

TEST_CASE("ranking orders by total then id") {
  std::vector<Entry> es;
  for (const auto& [id, text] : std::vector<std::pair<std::string, std::string>>{
           {"c", "kyou wa ii"}, {"b", "baka baka kimoi"}, {"a", "kyou wa ii"}, {"d", "kimoi shine"}}) {
    Entry e;
    e.id = id;
    e.text = text;
    es.push_back(e);
  }
  const Dataset d(es);
  const auto t = build_cooccurrence(d, testing::shipped(), DedupMode::Raw);
  const auto r = rank_entries(d, t, testing::shipped());
  REQUIRE(r.size() == 4);
  CHECK(r[0].entry_id == "b");
  CHECK(r[1].entry_id == "d");
  CHECK(r[2].entry_id == "a");
  CHECK(r[3].entry_id == "c");
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].total >= r[i].total);
}

TEST_CASE("span merging carves lower kinds") {
  const auto merged = merge_spans({
      {{0, 10}, "emoteme", "x"},
      {{2, 5}, "vulgarity", "kimoi"},
      {{4, 8}, "rule", "name.full"},
  });
  for (std::size_t i = 1; i < merged.size(); ++i) CHECK(merged[i - 1].span.end <= merged[i].span.start);
  REQUIRE(merged.size() == 4);
  CHECK(merged[0] == LabeledSpan{{0, 2}, "emoteme", "x"});
  CHECK(merged[1] == LabeledSpan{{2, 5}, "vulgarity", "kimoi"});
  CHECK(merged[2] == LabeledSpan{{5, 8}, "rule", "name.full"});
  CHECK(merged[3] == LabeledSpan{{8, 10}, "emoteme", "x"});
}

TEST_CASE("highlight marks vulgar words") {
  Entry e;
  e.id = "h";
  e.text = "aitsu kimoooi";
  const auto spans = highlight(e, testing::shipped());
  bool vulgar = false;
  for (const auto& s : spans)
    if (s.kind == "vulgarity") {
      vulgar = true;
      CHECK(s.span == Span{6, 13});
    }
  CHECK(vulgar);
}

TEST_CASE("f-score bounds") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t c = rng() % 50, n = rng() % 50;
    const std::uint64_t s = c == 0 || n == 0 ? 0 : rng() % (std::min(c, n) + 1);
    const auto m = metrics_from_counts(s, n, c);
    CHECK(m.f_score >= 0.0);
    CHECK(m.f_score <= 1.0);
    CHECK(m.f_score <= std::max(m.precision, m.recall) + 1e-12);
    CHECK(m.f_score >= std::min(m.precision, m.recall) - 1e-12);
  }
  CHECK(f_score(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(metrics_from_counts(5, 4, 10), ValidationError);
  const auto m = score({true, true, false, false}, {true, false, true, false});
  CHECK(m.s == 1);
  CHECK(m.precision == doctest::Approx(0.5));
  CHECK_THROWS_AS(score({true}, {}), ValidationError);
}

TEST_CASE("kappa") {
  using L = TriLabel;
  const std::vector<L> a = {L::Harmful, L::Normal, L::Doubtful, L::Normal};
  CHECK(cohen_kappa(a, a) == doctest::Approx(1.0));
  // Total disagreement on a balanced binary split: po = 0, pe = 0.5.
  CHECK(cohen_kappa({L::Harmful, L::Normal}, {L::Normal, L::Harmful}) == doctest::Approx(-1.0));
  CHECK(mean_pairwise_kappa({a, a, a}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cohen_kappa(a, {L::Normal}), ValidationError);
  CHECK_THROWS_AS(mean_pairwise_kappa({a}), ValidationError);
}

TEST_CASE("cross-validation reports per-fold metrics") {
  const Dataset d = load_dataset(testing::kData / "synthetic" / "corpus.jsonl");
  CvOptions o;
  o.k = 5;
  const auto g = cross_validate(d, testing::shipped(), {FeatureConfig{}}, o);
  REQUIRE(g.cells.size() == 1);
  CHECK(g.cells[0].folds.size() == 5);
  double mean = 0.0;
  for (const auto& f : g.cells[0].folds) mean += f.f_score / 5;
  CHECK(g.cells[0].mean.f_score == doctest::Approx(mean));
  o.pooled = true;
  const auto p = cross_validate(d, testing::shipped(), {FeatureConfig{}}, o);
  std::uint64_t s = 0, n = 0, c = 0;
  for (const auto& f : p.cells[0].folds) {
    s += f.s;
    n += f.n;
    c += f.c;
  }
  CHECK(p.cells[0].mean.f_score == doctest::Approx(metrics_from_counts(s, n, c).f_score));
  CHECK_THROWS_AS(g.cell(MainFeature::PosOnly, Weighting::Idf), NotFoundError);
}

TEST_CASE("a fold without both classes is rejected") {
  std::vector<Entry> es;
  for (int i = 0; i < 12; ++i) {
    Entry e;
    e.id = "e" + std::to_string(i);
    e.text = i == 0 ? "kimoi" : "kyou wa ii";
    e.gold_label = i == 0 ? TriLabel::Harmful : TriLabel::Normal;
    es.push_back(e);
  }
  CvOptions o;
  o.k = 3;
  CHECK_THROWS_AS(cross_validate(Dataset(es), testing::shipped(), {FeatureConfig{}}, o), ValidationError);
}
