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

#include "patrol/pipeline.hpp"

namespace patrol {

Pipeline::Pipeline(LexiconBundle bundle, NormalizerConfig normalizer, AffectConfig affect)
    : normalizer_(normalizer),
      affect_(bundle, AnalyzerConfig::from_bundle(bundle), std::move(affect)) {
  normalizer_.validate();
}

Pipeline Pipeline::load(const std::filesystem::path& lexicon_dir, NormalizerConfig normalizer) {
  return Pipeline(load_lexicons(lexicon_dir), normalizer);
}

std::vector<Token> Pipeline::tokenize(std::string_view text) const { return patrol::tokenize(text, analyzer()); }

std::optional<Match> Pipeline::resolve(const Token& token) const {
  const Romanizer& roman = analyzer().roman();
  const std::string reading = roman.romanize(token.surface);
  for (const std::string& form : {token.key(), reading}) {
    if (const auto* v = bundle().vulgarity_for_surface(form)) {
      return Match{token.surface, v->canonical, 0, {"lookup"}};
    }
  }
  if (token.pos != Pos::Unknown) return std::nullopt;
  const auto cps = decode_utf8(token.surface);
  if (cps.empty()) return std::nullopt;
  const ScriptClass cls = script_class(cps.front().value);
  if (cls != ScriptClass::Latin && cls != ScriptClass::Kana) return std::nullopt;
  const std::string core = normalizer_.strip_prolongations ? collapse_prolongations(reading) : reading;
  if (decode_utf8(core).size() < 3) return std::nullopt;
  return match_canonical(token.surface, bundle(), normalizer_, roman);
}

std::vector<VulgarityHit> Pipeline::vulgarities(const std::vector<Token>& tokens) const {
  std::vector<VulgarityHit> out;
  for (const auto& t : tokens) {
    if (auto m = resolve(t)) {
      const bool fuzzy = m->rule_trace.empty() || m->rule_trace.front() != "lookup";
      out.push_back({t.span(), t.surface, m->canonical, m->distance, fuzzy});
    }
  }
  return out;
}

}  // namespace patrol
