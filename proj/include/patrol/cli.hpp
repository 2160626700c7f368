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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/classifier.hpp"
#include "patrol/features.hpp"
#include "patrol/normalizer.hpp"
#include "patrol/ranker.hpp"

namespace patrol {

// Every knob the CLI exposes. Serializes to one JSON object; keys missing
// from a config file keep their defaults and flags override the file.
struct CliConfig {
  std::filesystem::path lexicons;
  std::filesystem::path rules;  // empty -> <lexicons>/rules.tsv
  std::filesystem::path model = "model.json";
  std::filesystem::path data_dir = "patrol-data";
  std::filesystem::path corpus;  // base corpus for serve / background for rank
  NormalizerConfig normalizer;
  FeatureConfig features;
  SvmHyper hyper;
  FusionMatrix fusion = FusionMatrix::standard();
  DedupMode dedup = DedupMode::DedupPlusSimilarity;
  bool doubtful_is_harmful = true;
  int k = 10;
  std::uint64_t seed = 0;
  bool stratified = true;
  bool pooled = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t top = 10;

  static CliConfig defaults();
  nlohmann::json to_json() const;
  // Throws ValidationError on unknown keys or ill-typed values.
  void merge(const nlohmann::json& j);
  std::filesystem::path rules_path() const;
};

// Entry point behind the `patrol` binary. Returns the process exit code:
// 0 success, 1 usage or validation error, 2 IO error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patrol
