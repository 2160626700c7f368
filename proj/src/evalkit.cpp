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

#include "patrol/evalkit.hpp"

#include <array>
#include <cstdio>
#include <future>
#include <map>

#include "patrol/error.hpp"

namespace patrol {

double f_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Metrics metrics_from_counts(std::uint64_t s, std::uint64_t n, std::uint64_t c) {
  if (s > n || s > c) throw ValidationError("correct count exceeds predicted or gold count");
  Metrics m;
  m.s = s;
  m.n = n;
  m.c = c;
  m.precision = n == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(n);
  m.recall = c == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(c);
  m.f_score = f_score(m.precision, m.recall);
  return m;
}

Metrics score(const std::vector<bool>& predicted, const std::vector<bool>& gold) {
  if (predicted.size() != gold.size()) throw ValidationError("predicted and gold labels differ in length");
  if (predicted.empty()) throw ValidationError("no samples to score");
  std::uint64_t s = 0, n = 0, c = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    n += predicted[i];
    c += gold[i];
    s += predicted[i] && gold[i];
  }
  return metrics_from_counts(s, n, c);
}

const CellResult& GridResult::cell(MainFeature main, Weighting weighting) const {
  for (const auto& c : cells) {
    if (c.config.main == main && c.config.weighting == weighting) return c;
  }
  throw NotFoundError("no grid cell " + std::string(main_feature_name(main)) + "/" +
                      std::string(weighting_name(weighting)));
}

const CellResult& GridResult::best() const {
  if (cells.empty()) throw NotFoundError("empty grid");
  const CellResult* b = &cells.front();
  for (const auto& c : cells) {
    if (c.mean.f_score > b->mean.f_score) b = &c;
  }
  return *b;
}

namespace {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

CellResult run_cell(const FeatureConfig& config, const std::vector<Fold>& folds,
                    const std::vector<std::vector<Token>>& tokens, const std::vector<bool>& gold,
                    const CvOptions& options) {
  CellResult cell;
  cell.config = config;
  std::uint64_t s = 0, n = 0, c = 0;
  for (const auto& fold : folds) {
    std::vector<std::vector<Token>> train_docs;
    std::vector<bool> train_y;
    for (std::size_t i : fold.train) {
      train_docs.push_back(tokens[i]);
      train_y.push_back(gold[i]);
    }
    const SvmModel model = train_svm(train_docs, train_y, config, options.hyper);
    std::vector<bool> predicted, truth;
    for (std::size_t i : fold.test) {
      predicted.push_back(predict(model, tokens[i]).harmful);
      truth.push_back(gold[i]);
    }
    const Metrics m = score(predicted, truth);
    s += m.s;
    n += m.n;
    c += m.c;
    cell.folds.push_back(m);
  }
  if (options.pooled) {
    cell.mean = metrics_from_counts(s, n, c);
  } else {
    const double k = static_cast<double>(cell.folds.size());
    for (const auto& m : cell.folds) {
      cell.mean.precision += m.precision / k;
      cell.mean.recall += m.recall / k;
      cell.mean.f_score += m.f_score / k;
    }
    cell.mean.s = s;
    cell.mean.n = n;
    cell.mean.c = c;
  }
  return cell;
}

}  // namespace

GridResult cross_validate(const Dataset& dataset, const Pipeline& pipeline, const std::vector<FeatureConfig>& grid,
                          const CvOptions& options) {
  std::vector<Entry> labeled;
  for (const auto& e : dataset.entries()) {
    if (e.gold_label) labeled.push_back(e);
  }
  const Dataset data(std::move(labeled));
  const FoldPlan plan = split_folds(data, options.k, options.seed, options.stratified);

  std::vector<std::vector<Token>> tokens;
  std::vector<bool> gold;
  std::vector<Fold> folds(static_cast<std::size_t>(options.k));
  for (std::size_t i = 0; i < data.size(); ++i) {
    tokens.push_back(pipeline.tokenize(data[i].text));
    gold.push_back(is_harmful(*data[i].gold_label, options.doubtful_is_harmful));
    const int f = plan.assignment.at(data[i].id);
    for (int j = 0; j < options.k; ++j) {
      (j == f ? folds[static_cast<std::size_t>(j)].test : folds[static_cast<std::size_t>(j)].train).push_back(i);
    }
  }
  for (std::size_t j = 0; j < folds.size(); ++j) {
    for (const auto* part : {&folds[j].test, &folds[j].train}) {
      bool pos = false, neg = false;
      for (std::size_t i : *part) (gold[i] ? pos : neg) = true;
      if (!pos || !neg) {
        throw ValidationError("fold " + std::to_string(j) + " lacks a class in its " +
                              (part == &folds[j].test ? "test" : "training") + " part");
      }
    }
  }

  // Cells are independent; results land in grid order.
  std::vector<std::future<CellResult>> jobs;
  for (const auto& config : grid) {
    jobs.push_back(std::async(std::launch::async, run_cell, config, std::cref(folds), std::cref(tokens),
                              std::cref(gold), std::cref(options)));
  }
  GridResult result;
  for (auto& j : jobs) result.cells.push_back(j.get());
  return result;
}

GridResult cross_validate(const Dataset& dataset, const Pipeline& pipeline, const CvOptions& options) {
  return cross_validate(dataset, pipeline, FeatureConfig::grid(), options);
}

nlohmann::json to_json(const Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f_score", m.f_score},
          {"s", m.s},                 {"n", m.n},           {"c", m.c}};
}

nlohmann::json to_json(const CellResult& c) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& m : c.folds) folds.push_back(to_json(m));
  return {{"main", main_feature_name(c.config.main)},
          {"weighting", weighting_name(c.config.weighting)},
          {"precision", c.mean.precision},
          {"recall", c.mean.recall},
          {"f_score", c.mean.f_score},
          {"folds", folds}};
}

std::string format_grid(const GridResult& grid) {
  std::string out = "main      weighting  precision  recall  f_score\n";
  char line[128];
  for (const auto& c : grid.cells) {
    std::snprintf(line, sizeof line, "%-9s %-10s %9.4f %7.4f %8.4f\n",
                  std::string(main_feature_name(c.config.main)).c_str(),
                  std::string(weighting_name(c.config.weighting)).c_str(), c.mean.precision, c.mean.recall,
                  c.mean.f_score);
    out += line;
  }
  return out;
}

double cohen_kappa(const std::vector<TriLabel>& a, const std::vector<TriLabel>& b) {
  if (a.size() != b.size()) throw ValidationError("annotation lists differ in length");
  if (a.empty()) throw ValidationError("no annotations");
  std::array<double, 3> ma{}, mb{};
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[static_cast<std::size_t>(severity(a[i]))] += 1;
    mb[static_cast<std::size_t>(severity(b[i]))] += 1;
    agree += a[i] == b[i];
  }
  const double total = static_cast<double>(a.size());
  const double po = agree / total;
  double pe = 0.0;
  for (std::size_t l = 0; l < 3; ++l) pe += (ma[l] / total) * (mb[l] / total);
  if (pe == 1.0) return po == 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

double mean_pairwise_kappa(const std::vector<std::vector<TriLabel>>& raters) {
  if (raters.size() < 2) throw ValidationError("need at least two raters");
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < raters.size(); ++i) {
    for (std::size_t j = i + 1; j < raters.size(); ++j) {
      sum += cohen_kappa(raters[i], raters[j]);
      ++pairs;
    }
  }
  return sum / pairs;
}

}  // namespace patrol
