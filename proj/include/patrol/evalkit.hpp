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
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/classifier.hpp"
#include "patrol/corpus.hpp"
#include "patrol/features.hpp"
#include "patrol/pipeline.hpp"

namespace patrol {

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  std::uint64_t s = 0;  // predicted harmful and gold harmful
  std::uint64_t n = 0;  // predicted harmful
  std::uint64_t c = 0;  // gold harmful
};

// Harmonic mean; 0 when p + r = 0.
double f_score(double precision, double recall);
Metrics metrics_from_counts(std::uint64_t s, std::uint64_t n, std::uint64_t c);
// Throws ValidationError on a length mismatch or empty input.
Metrics score(const std::vector<bool>& predicted, const std::vector<bool>& gold);

struct CvOptions {
  int k = 10;
  std::uint64_t seed = 0;
  bool stratified = true;
  // Pool s/n/c over folds instead of averaging per-fold metrics.
  bool pooled = false;
  bool doubtful_is_harmful = true;
  SvmHyper hyper;
};

struct CellResult {
  FeatureConfig config;
  Metrics mean;                     // mean over folds (or pooled)
  std::vector<Metrics> folds;       // by fold index
};

struct GridResult {
  std::vector<CellResult> cells;    // FeatureConfig::grid() order

  const CellResult& cell(MainFeature main, Weighting weighting) const;
  const CellResult& best() const;   // highest F, first in grid order on ties
};

// k-fold cross-validation of every config. Vocabularies come from the
// training folds only. A fold whose test or training part lacks a class
// raises ValidationError naming the fold.
GridResult cross_validate(const Dataset& dataset, const Pipeline& pipeline, const std::vector<FeatureConfig>& grid,
                          const CvOptions& options = {});
GridResult cross_validate(const Dataset& dataset, const Pipeline& pipeline, const CvOptions& options = {});

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const CellResult& c);
std::string format_grid(const GridResult& grid);

// Cohen's kappa over tri-labels. 1 when both raters agree perfectly even if
// chance agreement is 1. Throws ValidationError on length mismatch or empty.
double cohen_kappa(const std::vector<TriLabel>& a, const std::vector<TriLabel>& b);
// Mean pairwise kappa over all rater pairs (needs at least two raters).
double mean_pairwise_kappa(const std::vector<std::vector<TriLabel>>& raters);

}  // namespace patrol
