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

#include <string>
#include <string_view>
#include <vector>

#include "patrol/lexicons.hpp"
#include "patrol/text.hpp"

namespace patrol {

struct EmoticonCandidate {
  Span span;
  std::string raw;
};

// Candidates are maximal runs of symbol characters and area glyphs (letters
// such as 'o' only count when they are not part of a surrounding word) that
// are at least three characters long and hold an eye or mouth glyph.
// Database emoticons found verbatim are returned as well, whatever their
// length, unless a run candidate already covers them. Sorted by position.
std::vector<EmoticonCandidate> extract_emoticons(std::string_view text, const LexiconBundle& bundle);

enum class EmoticonStep { None, Database, Triplet, Areas };

struct EmoticonAnalysis {
  EmotionSet emotions;
  EmoticonStep step = EmoticonStep::None;
};

// 1. exact database lookup; 2. first eye-mouth-eye triplet, intersecting the
// eye and mouth emotion sets (union when the intersection is empty);
// 3. union over every recognized eye/mouth glyph.
EmoticonAnalysis analyze_emoticon_detailed(std::string_view raw, const LexiconBundle& bundle);
EmotionSet analyze_emoticon(std::string_view raw, const LexiconBundle& bundle);

}  // namespace patrol
