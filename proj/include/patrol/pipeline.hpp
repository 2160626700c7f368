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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patrol/affect.hpp"
#include "patrol/lexicons.hpp"
#include "patrol/normalizer.hpp"
#include "patrol/tokenizer.hpp"

namespace patrol {

struct VulgarityHit {
  Span span;
  std::string surface;
  std::string canonical;
  int distance = 0;
  bool normalized = false;  // found by edit distance rather than lookup
};

// Lexicons, analyzer, normalizer and affect analyzer wired together once.
// Immutable after construction.
class Pipeline {
 public:
  explicit Pipeline(LexiconBundle bundle, NormalizerConfig normalizer = {}, AffectConfig affect = {});
  static Pipeline load(const std::filesystem::path& lexicon_dir, NormalizerConfig normalizer = {});

  const LexiconBundle& bundle() const { return affect_.bundle(); }
  const AnalyzerConfig& analyzer() const { return affect_.analyzer(); }
  const NormalizerConfig& normalizer() const { return normalizer_; }
  const AffectAnalyzer& affect() const { return affect_; }

  std::vector<Token> tokenize(std::string_view text) const;

  // Canonical vulgarity behind a token. Direct lookups (surface or reading
  // against canonicals, readings and variants) come first; edit distance is
  // only tried on Unknown Latin/kana tokens of three or more letters, so
  // ordinary dictionary words never turn vulgar by accident.
  std::optional<Match> resolve(const Token& token) const;
  std::vector<VulgarityHit> vulgarities(const std::vector<Token>& tokens) const;

 private:
  NormalizerConfig normalizer_;
  AffectAnalyzer affect_;
};

}  // namespace patrol
