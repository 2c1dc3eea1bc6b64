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

#include "tokenizer.h"

#include <algorithm>
#include <fstream>

#include "error.h"
#include "utf8.h"

namespace nre {

std::string_view TokenizerModeName(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::kChar: return "char";
    case TokenizerMode::kWord: return "word";
    case TokenizerMode::kWhitespace: return "whitespace";
  }
  return "whitespace";
}

TokenizerMode ParseTokenizerMode(std::string_view name) {
  if (name == "char") return TokenizerMode::kChar;
  if (name == "word") return TokenizerMode::kWord;
  if (name == "whitespace") return TokenizerMode::kWhitespace;
  throw Error(ErrorCode::kConfig,
              "unknown tokenizer mode '" + std::string(name) + "'");
}

std::size_t EntityTagLength(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '<') return 0;
  std::size_t i = pos + 1;
  if (i < text.size() && text[i] == '/') ++i;
  const std::size_t name_start = i;
  while (i < text.size() && (utf8::IsAsciiAlnum(text[i]) || text[i] == '_')) {
    ++i;
  }
  if (i == name_start || i >= text.size() || text[i] != '>') return 0;
  return i + 1 - pos;
}

Tokenizer::Tokenizer(TokenizerMode mode, std::vector<std::string> lexicon)
    : mode_(mode) {
  for (auto& word : lexicon) {
    if (word.empty()) continue;
    max_word_bytes_ = std::max(max_word_bytes_, word.size());
    lexicon_.insert(std::move(word));
  }
}

std::vector<std::string> Tokenizer::Tokenize(std::string_view text) const {
  utf8::Validate(text);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && utf8::IsAsciiSpace(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !utf8::IsAsciiSpace(text[end])) ++end;
    if (end > pos) TokenizeChunk(text.substr(pos, end - pos), &out);
    pos = end;
  }
  return out;
}

void Tokenizer::TokenizeChunk(std::string_view chunk,
                              std::vector<std::string>* out) const {
  // Pull entity tags out first; what remains between them is handled per
  // mode.
  std::size_t start = 0;
  std::size_t pos = 0;
  auto flush = [&](std::size_t end) {
    if (end <= start) return;
    const std::string_view piece = chunk.substr(start, end - start);
    switch (mode_) {
      case TokenizerMode::kWhitespace:
        out->emplace_back(piece);
        break;
      case TokenizerMode::kChar:
        for (std::size_t i = 0; i < piece.size();) {
          const std::size_t len = utf8::SequenceLength(piece, i);
          out->emplace_back(piece.substr(i, len));
          i += len;
        }
        break;
      case TokenizerMode::kWord:
        SegmentWords(piece, out);
        break;
    }
  };
  while (pos < chunk.size()) {
    const std::size_t tag = EntityTagLength(chunk, pos);
    if (tag > 0) {
      flush(pos);
      out->emplace_back(chunk.substr(pos, tag));
      pos += tag;
      start = pos;
    } else {
      pos += utf8::SequenceLength(chunk, pos);
    }
  }
  flush(chunk.size());
}

void Tokenizer::SegmentWords(std::string_view text,
                             std::vector<std::string>* out) const {
  std::size_t pos = 0;
  while (pos < text.size()) {
    // Longest lexicon entry starting here, on code point boundaries.
    std::size_t best = 0;
    if (!lexicon_.empty()) {
      std::size_t len = 0;
      while (pos + len < text.size() && len < max_word_bytes_) {
        len += utf8::SequenceLength(text, pos + len);
        if (len <= max_word_bytes_ &&
            lexicon_.count(std::string(text.substr(pos, len))) > 0) {
          best = len;
        }
      }
    }
    if (best == 0 && utf8::IsAsciiAlnum(text[pos])) {
      while (pos + best < text.size() && utf8::IsAsciiAlnum(text[pos + best])) {
        ++best;
      }
    }
    if (best == 0) best = utf8::SequenceLength(text, pos);
    out->emplace_back(text.substr(pos, best));
    pos += best;
  }
}

std::string Tokenizer::Join(std::span<const std::string> tokens) const {
  std::string spaced;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) spaced += ' ';
    spaced += tokens[i];
  }
  if (mode_ != TokenizerMode::kChar) return spaced;
  // Char mode reads back the bare concatenation unless neighbouring
  // characters happen to fuse (into a tag or a metacharacter pair).
  std::string packed;
  for (const auto& t : tokens) packed += t;
  const bool fuses = packed.find("@@") != std::string::npos ||
                     packed.find(".*") != std::string::npos;
  if (!fuses) {
    const auto back = Tokenize(packed);
    if (std::equal(back.begin(), back.end(), tokens.begin(), tokens.end())) {
      return packed;
    }
  }
  return spaced;
}

std::vector<std::string> LoadLexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && utf8::IsAsciiSpace(line.back())) line.pop_back();
    std::size_t lead = 0;
    while (lead < line.size() && utf8::IsAsciiSpace(line[lead])) ++lead;
    line.erase(0, lead);
    if (line.empty() || line[0] == '#') continue;
    words.push_back(line);
  }
  return words;
}

namespace {

bool IsUnsupported(char c) {
  switch (c) {
    case '*': case '+': case '?': case '[': case ']': case '^': case '$':
    case '\\':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<PatternMark> TokenizePattern(std::string_view text,
                                         const Tokenizer& tokenizer) {
  utf8::Validate(text);
  std::vector<PatternMark> marks;
  std::size_t segment = 0;
  int depth = 0;
  std::size_t last_open = 0;

  auto flush = [&](std::size_t end) {
    if (end <= segment) return;
    for (auto& token : tokenizer.Tokenize(text.substr(segment, end - segment))) {
      marks.push_back({MarkKind::kLiteral, std::move(token), -1, segment});
    }
  };
  auto emit = [&](MarkKind kind, std::size_t at, std::size_t len,
                  int distance = -1) {
    flush(at);
    marks.push_back({kind, {}, distance, at});
    segment = at + len;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    const char next = pos + 1 < text.size() ? text[pos + 1] : '\0';
    if (EntityTagLength(text, pos) > 0) {
      pos += EntityTagLength(text, pos);
      continue;
    }
    if (c == '.') {
      if (next != '*') {
        throw Error(ErrorCode::kUnsupportedSyntax,
                    "'.' is only supported as part of '.*'", pos);
      }
      emit(MarkKind::kGapAny, pos, 2);
      pos += 2;
    } else if (c == '{') {
      std::size_t i = pos + 1;
      if (i >= text.size() || text[i] != ',') {
        throw Error(ErrorCode::kMalformedGap,
                    "expected '{,d}' at byte " + std::to_string(pos), pos);
      }
      ++i;
      const std::size_t digits = i;
      long long value = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        value = value * 10 + (text[i] - '0');
        if (value > 1'000'000) {
          throw Error(ErrorCode::kMalformedGap, "gap distance too large", pos);
        }
        ++i;
      }
      if (i == digits || i >= text.size() || text[i] != '}') {
        throw Error(ErrorCode::kMalformedGap,
                    "'{,d}' needs a non-negative integer d at byte " +
                        std::to_string(pos),
                    pos);
      }
      emit(MarkKind::kGapBounded, pos, i + 1 - pos, static_cast<int>(value));
      pos = i + 1;
    } else if (c == '}') {
      throw Error(ErrorCode::kMalformedGap, "stray '}'", pos);
    } else if (c == '|') {
      emit(MarkKind::kBar, pos, 1);
      ++pos;
    } else if (c == '(') {
      if (depth == 0) last_open = pos;
      ++depth;
      emit(MarkKind::kOpen, pos, 1);
      ++pos;
    } else if (c == ')') {
      if (depth == 0) {
        throw Error(ErrorCode::kUnbalancedGroup, "unmatched ')'", pos);
      }
      --depth;
      emit(MarkKind::kClose, pos, 1);
      ++pos;
    } else if (c == '@' && next == '@') {
      if (depth > 0) {
        throw Error(ErrorCode::kUnbalancedGroup, "unclosed '('", last_open);
      }
      emit(MarkKind::kSeparator, pos, 2);
      pos += 2;
    } else if (IsUnsupported(c)) {
      throw Error(ErrorCode::kUnsupportedSyntax,
                  std::string("unsupported regex syntax '") + c + "'", pos);
    } else {
      pos += utf8::SequenceLength(text, pos);
    }
  }
  if (depth > 0) {
    throw Error(ErrorCode::kUnbalancedGroup, "unclosed '('", last_open);
  }
  flush(text.size());
  return marks;
}

}  // namespace nre
