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

#include <array>
#include <cstdint>
#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "patrol/corpus.hpp"
#include "patrol/features.hpp"
#include "patrol/pipeline.hpp"

namespace patrol {

struct SvmHyper {
  double C = 1.0;
  double tolerance = 1e-6;
  int max_epochs = 1000;
  // Value of the constant feature carrying the bias. The bias weight is
  // regularized like any other weight: the objective is
  // 0.5 * (|w|^2 + (bias / bias_term)^2) + C * sum(hinge).
  double bias_term = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainingMeta {
  double objective = 0.0;  // primal, recomputed from the returned weights
  double dual_objective = 0.0;
  int epochs = 0;
  bool converged = false;
};

// Linear soft-margin SVM trained by dual coordinate descent (hinge loss).
struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;
  SvmHyper hyper;
  TrainingMeta meta;

  double decision(const FeatureVector& x) const { return x.dot(weights) + bias; }
};

// labels are +1 (harmful) / -1. Deterministic for fixed data order and seed.
// Throws ValidationError on single-class input or mismatched sizes.
LinearSvm train_linear_svm(const std::vector<FeatureVector>& xs, const std::vector<int>& labels, std::size_t dim,
                           const SvmHyper& hyper = {});

struct SvmModel {
  LinearSvm svm;
  Vocabulary vocab;
  FeatureConfig features;
  bool doubtful_is_harmful = true;
};

struct Prediction {
  double score = 0.0;
  bool harmful = false;  // score > 0; a zero score is non-harmful
};

SvmModel train_svm(const std::vector<std::vector<Token>>& entries, const std::vector<bool>& harmful,
                   const FeatureConfig& features = {}, const SvmHyper& hyper = {});
// Trains on the labeled entries of a dataset.
SvmModel train_svm(const Dataset& dataset, const Pipeline& pipeline, const FeatureConfig& features = {},
                   const SvmHyper& hyper = {}, bool doubtful_is_harmful = true);

Prediction predict(const SvmModel& model, const std::vector<Token>& tokens);
Prediction predict(const SvmModel& model, const FeatureVector& x);

inline constexpr int kModelFormatVersion = 1;
nlohmann::json model_to_json(const SvmModel& model);
SvmModel model_from_json(const nlohmann::json& j);
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

enum class RuleFamily {
  PersonName, Initials, Institution, AddressPhone, PrivateQuestion, InfoReveal, Quarrel, Vulgarity
};
std::string_view rule_family_name(RuleFamily f);
RuleFamily parse_rule_family(std::string_view name);

struct RulePattern {
  std::string id;
  RuleFamily family = RuleFamily::PersonName;
  std::string pattern;  // ECMAScript regex over the UTF-8 text
  bool ignore_case = false;
  TriLabel target = TriLabel::Doubtful;  // Harmful (identified) or Doubtful
  std::regex regex;
};

class RulePatternSet {
 public:
  RulePatternSet() = default;
  // rules.tsv rows: id, family, pattern, target (H|D), optional flags ("i").
  static RulePatternSet parse(std::string_view tsv, std::string_view origin = "rules.tsv");
  static RulePatternSet load(const std::filesystem::path& path);

  void add(RulePattern p);
  const std::vector<RulePattern>& patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }

 private:
  std::vector<RulePattern> patterns_;
};

struct RuleTrigger {
  std::string rule_id;
  Span span;
  friend bool operator==(const RuleTrigger&, const RuleTrigger&) = default;
};

struct RuleScreenResult {
  TriLabel label = TriLabel::Normal;
  std::vector<RuleTrigger> triggers;  // sorted by span, then rule id
};

inline constexpr std::string_view kVulgarityRuleId = "vulgarity";

// Every pattern family plus the vulgarity rule (lookup or normalized match,
// Doubtful). The most severe target wins.
RuleScreenResult rule_screen(std::string_view text, const std::vector<Token>& tokens, const RulePatternSet& patterns,
                             const Pipeline& pipeline);
RuleScreenResult rule_screen(const Entry& entry, const RulePatternSet& patterns, const Pipeline& pipeline);

// Final label indexed by [rules label][svm harmful].
class FusionMatrix {
 public:
  // Harmful if the rules say so or both agree on harm; Doubtful if exactly
  // one of {svm harmful, rules doubtful} holds; Normal otherwise.
  static FusionMatrix standard();

  TriLabel fuse(TriLabel rules, bool svm_harmful) const {
    return cells_[static_cast<std::size_t>(severity(rules))][svm_harmful ? 1 : 0];
  }
  void set(TriLabel rules, bool svm_harmful, TriLabel out) {
    cells_[static_cast<std::size_t>(severity(rules))][svm_harmful ? 1 : 0] = out;
  }

  // {"N": ["N", "D"], "D": [...], "H": [...]}: [svm non-harmful, svm harmful].
  nlohmann::json to_json() const;
  static FusionMatrix from_json(const nlohmann::json& j);

 private:
  std::array<std::array<TriLabel, 2>, 3> cells_{};
};

struct Classification {
  TriLabel final = TriLabel::Normal;
  Prediction svm;
  RuleScreenResult rules;
};

Classification classify_entry(const Entry& entry, const SvmModel& model, const RulePatternSet& patterns,
                              const Pipeline& pipeline, const FusionMatrix& fusion = FusionMatrix::standard());
Classification classify_tokens(std::string_view text, const std::vector<Token>& tokens, const SvmModel& model,
                               const RulePatternSet& patterns, const Pipeline& pipeline,
                               const FusionMatrix& fusion = FusionMatrix::standard());

}  // namespace patrol
