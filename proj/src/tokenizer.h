// Copyright 2026 The NRE Authors.
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

#ifndef NRE_TOKENIZER_H_
#define NRE_TOKENIZER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace nre {

enum class TokenizerMode { kChar, kWord, kWhitespace };

std::string_view TokenizerModeName(TokenizerMode mode);

// Accepts "char", "word" and "whitespace".
TokenizerMode ParseTokenizerMode(std::string_view name);

// Splits case text (and the literal parts of rule text) into tokens.
//
//   char:       one code point per token, whitespace dropped.
//   whitespace: split on ASCII whitespace.
//   word:       split on ASCII whitespace, then forward maximum matching
//               against a lexicon; ASCII alphanumeric runs stay whole and
//               anything else falls back to single code points.
//
// Entity tags such as <e1> and </e2> are single tokens in every mode.
class Tokenizer {
 public:
  explicit Tokenizer(TokenizerMode mode = TokenizerMode::kWhitespace,
                     std::vector<std::string> lexicon = {});

  TokenizerMode mode() const { return mode_; }

  // Throws Error(kInvalidUtf8) on malformed input.
  std::vector<std::string> Tokenize(std::string_view text) const;

  // Renders a run of adjacent tokens so that Tokenize() gives them back.
  std::string Join(std::span<const std::string> tokens) const;

 private:
  void TokenizeChunk(std::string_view chunk,
                     std::vector<std::string>* out) const;
  void SegmentWords(std::string_view text,
                    std::vector<std::string>* out) const;

  TokenizerMode mode_;
  std::unordered_set<std::string> lexicon_;
  std::size_t max_word_bytes_ = 0;
};

// Reads a word list, one entry per line; blank lines and "#" comments are
// skipped.
std::vector<std::string> LoadLexicon(const std::string& path);

// Length in bytes of an entity tag (<e1>, </e2>, ...) at text[pos], or 0.
std::size_t EntityTagLength(std::string_view text, std::size_t pos);

enum class MarkKind {
  kLiteral,
  kGapAny,      // ".*"
  kGapBounded,  // "{,d}"
  kBar,
  kOpen,
  kClose,
  kSeparator,   // "@@"
};

struct PatternMark {
  MarkKind kind;
  std::string token;     // kLiteral only
  int distance = -1;     // kGapBounded only
  std::size_t offset = 0;

  bool operator==(const PatternMark&) const = default;
};

// Lexes dialect text into literal tokens and metacharacter marks. Checks
// parenthesis balance on each side of "@@" and the "{,d}" form; anything
// else that looks like general regex syntax is rejected.
std::vector<PatternMark> TokenizePattern(std::string_view text,
                                         const Tokenizer& tokenizer);

}  // namespace nre

#endif  // NRE_TOKENIZER_H_
