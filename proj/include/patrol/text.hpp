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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace patrol {

// Half-open byte range into a UTF-8 string.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class ScriptClass { Whitespace, Latin, Digit, Kana, Ideograph, Symbol };

// One decoded code point and where it sits in the source bytes.
struct CodePoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;
};

// Invalid bytes decode as U+FFFD of length 1, so offsets always tile the input.
std::vector<CodePoint> decode_utf8(std::string_view text);
void append_utf8(std::string& out, char32_t cp);
std::u32string to_u32(std::string_view text);
std::string to_utf8(std::u32string_view text);

ScriptClass script_class(char32_t cp);

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace, dropping empties.
std::vector<std::string> split_words(std::string_view s);

}  // namespace patrol

namespace patrol {

// A span tagged for display: kind is e.g. "vulgarity", "emoteme",
// "expression"; value carries the matched form or annotation.
struct LabeledSpan {
  Span span;
  std::string kind;
  std::string value;

  friend bool operator==(const LabeledSpan&, const LabeledSpan&) = default;
};

}  // namespace patrol
