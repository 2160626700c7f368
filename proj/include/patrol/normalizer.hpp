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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patrol/lexicons.hpp"
#include "patrol/tokenizer.hpp"

namespace patrol {

struct NormalizerConfig {
  int threshold = 2;
  bool strip_prolongations = true;
  bool anchor_first_letter = true;
  // Optional length-scaled mode: threshold = floor(len / 3) of the
  // normalized input, still capped by max_threshold.
  bool length_scaled = false;
  int max_threshold = 4;

  // Throws ValidationError when threshold is negative or above max_threshold.
  void validate() const;
  int threshold_for(std::size_t normalized_length) const;
};

struct Match {
  std::string input;
  std::string canonical;
  int distance = 0;
  std::vector<std::string> rule_trace;
};

// Unit-cost edit distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Collapses every run of three or more identical characters to a single
// character; runs of two are kept.
std::string collapse_prolongations(std::string_view word);
std::string apply_heuristics(std::string_view word, const NormalizerConfig& config = {});

// Romanize -> heuristics -> nearest canonical reading within the threshold.
// With anchoring on, only canonicals sharing the first letter compete. Ties
// go to the higher hit rate, then the lexicographically smaller canonical.
std::optional<Match> match_canonical(std::string_view word, const LexiconBundle& bundle,
                                     const NormalizerConfig& config = {},
                                     const Romanizer& romanizer = Romanizer::standard());

}  // namespace patrol
