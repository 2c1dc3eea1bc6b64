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

#include "rule_dialect.h"

#include <fstream>
#include <map>

#include "error.h"
#include "utf8.h"

namespace nre {

PatternNode PatternNode::Literal(std::vector<std::string> tokens) {
  PatternNode node;
  node.kind = Kind::kTokenLiteral;
  node.tokens = std::move(tokens);
  return node;
}

PatternNode PatternNode::Gap(int distance) {
  PatternNode node;
  node.kind = Kind::kGap;
  node.distance = distance;
  return node;
}

PatternNode PatternNode::Concat(std::vector<PatternNode> children) {
  PatternNode node;
  node.kind = Kind::kConcat;
  node.children = std::move(children);
  return node;
}

PatternNode PatternNode::Alternation(std::vector<PatternNode> branches) {
  PatternNode node;
  node.kind = Kind::kAlternation;
  node.children = std::move(branches);
  return node;
}

bool StructurallyEqual(const RuleAst& a, const RuleAst& b) {
  return a.positive == b.positive && a.negative == b.negative;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<PatternMark>& marks) : marks_(marks) {}

  RuleAst ParseRule() {
    RuleAst ast;
    std::size_t separators = 0;
    for (const auto& m : marks_) {
      if (m.kind == MarkKind::kSeparator && ++separators > 1) {
        throw Error(ErrorCode::kSecondSeparator,
                    "only one '@@' is allowed", m.offset);
      }
    }
    auto positive = ParseAlternation(/*allow_bare_bar=*/false);
    if (!positive) {
      throw Error(ErrorCode::kEmptyPositive, "positive pattern is empty",
                  AtOffset());
    }
    ast.positive = std::move(*positive);
    if (AtEnd()) return ast;
    Expect(MarkKind::kSeparator);
    if (AtEnd()) return ast;
    auto negative = ParseAlternation(/*allow_bare_bar=*/true);
    if (!negative) {
      throw Error(ErrorCode::kEmptyBranch, "empty negative branch",
                  AtOffset());
    }
    ast.negative = std::move(*negative);
    if (!AtEnd()) Expect(MarkKind::kSeparator);
    return ast;
  }

 private:
  bool AtEnd() const { return pos_ >= marks_.size(); }
  const PatternMark* Peek() const { return AtEnd() ? nullptr : &marks_[pos_]; }
  std::size_t AtOffset() const {
    return AtEnd() ? (marks_.empty() ? 0 : marks_.back().offset)
                   : marks_[pos_].offset;
  }

  void Expect(MarkKind kind) {
    const PatternMark* m = Peek();
    if (m != nullptr && m->kind == kind) {
      ++pos_;
      return;
    }
    if (m != nullptr && m->kind == MarkKind::kClose) {
      throw Error(ErrorCode::kUnbalancedGroup, "unmatched ')'", m->offset);
    }
    if (kind == MarkKind::kClose) {
      throw Error(ErrorCode::kUnbalancedGroup, "expected ')'", AtOffset());
    }
    throw Error(ErrorCode::kUnsupportedSyntax, "unexpected token", AtOffset());
  }

  std::optional<PatternNode> ParseAlternation(bool allow_bare_bar) {
    std::vector<PatternNode> branches;
    const std::size_t start = AtOffset();
    auto first = ParseSequence();
    bool saw_bar = false;
    while (Peek() != nullptr && Peek()->kind == MarkKind::kBar) {
      if (!allow_bare_bar) {
        throw Error(ErrorCode::kBareAlternation,
                    "alternation in the positive part needs parentheses",
                    Peek()->offset);
      }
      saw_bar = true;
      if (!first) throw Error(ErrorCode::kEmptyBranch, "empty branch", start);
      branches.push_back(std::move(*first));
      ++pos_;
      first = ParseSequence();
    }
    if (!saw_bar) return first;
    if (!first) {
      throw Error(ErrorCode::kEmptyBranch, "empty branch", AtOffset());
    }
    branches.push_back(std::move(*first));
    return PatternNode::Alternation(std::move(branches));
  }

  std::optional<PatternNode> ParseSequence() {
    std::vector<PatternNode> items;
    auto last_is_gap = [&] {
      return !items.empty() && items.back().kind == PatternNode::Kind::kGap;
    };
    auto add_element = [&](PatternNode node) {
      if (!items.empty() && !last_is_gap()) {
        items.push_back(PatternNode::Gap(0));
      }
      if (node.kind == PatternNode::Kind::kConcat) {
        for (auto& child : node.children) items.push_back(std::move(child));
      } else {
        items.push_back(std::move(node));
      }
    };
    while (const PatternMark* m = Peek()) {
      if (m->kind == MarkKind::kLiteral) {
        std::vector<std::string> tokens;
        while (Peek() != nullptr && Peek()->kind == MarkKind::kLiteral) {
          tokens.push_back(Peek()->token);
          ++pos_;
        }
        add_element(PatternNode::Literal(std::move(tokens)));
      } else if (m->kind == MarkKind::kOpen) {
        const std::size_t open = m->offset;
        ++pos_;
        auto inner = ParseAlternation(/*allow_bare_bar=*/true);
        if (!inner) {
          throw Error(ErrorCode::kEmptyBranch, "empty group", open);
        }
        Expect(MarkKind::kClose);
        add_element(std::move(*inner));
      } else if (m->kind == MarkKind::kGapAny ||
                 m->kind == MarkKind::kGapBounded) {
        if (items.empty() || last_is_gap()) {
          throw Error(ErrorCode::kDanglingGapOperator,
                      "gap operator without a left operand", m->offset);
        }
        items.push_back(PatternNode::Gap(
            m->kind == MarkKind::kGapAny ? -1 : m->distance));
        ++pos_;
      } else {
        break;
      }
    }
    if (items.empty()) return std::nullopt;
    if (last_is_gap()) {
      throw Error(ErrorCode::kDanglingGapOperator,
                  "gap operator without a right operand", AtOffset());
    }
    if (items.size() == 1) return std::move(items.front());
    return PatternNode::Concat(std::move(items));
  }

  const std::vector<PatternMark>& marks_;
  std::size_t pos_ = 0;
};

}  // namespace

RuleAst ParseRule(const RuleSource& source, const Tokenizer& tokenizer) {
  try {
    if (source.label.empty()) {
      throw Error(ErrorCode::kEmptyLabel, "rule label is empty");
    }
    const auto marks = TokenizePattern(source.text, tokenizer);
    RuleAst ast = Parser(marks).ParseRule();
    ast.source = source;
    return ast;
  } catch (const Error& e) {
    if (source.id.empty()) throw;
    throw e.WithContext("rule " + source.id);
  }
}

std::string PrintPattern(const PatternNode& node, const Tokenizer& tokenizer) {
  switch (node.kind) {
    case PatternNode::Kind::kTokenLiteral:
      return tokenizer.Join(node.tokens);
    case PatternNode::Kind::kGap:
      return node.distance < 0 ? ".*"
                               : "{," + std::to_string(node.distance) + "}";
    case PatternNode::Kind::kConcat: {
      std::string out;
      for (const auto& child : node.children) {
        out += PrintPattern(child, tokenizer);
      }
      return out;
    }
    case PatternNode::Kind::kAlternation: {
      std::string out = "(";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i > 0) out += '|';
        out += PrintPattern(node.children[i], tokenizer);
      }
      return out + ")";
    }
  }
  return {};
}

std::string PrintCanonical(const RuleAst& ast, const Tokenizer& tokenizer) {
  std::string out = PrintPattern(ast.positive, tokenizer);
  if (ast.negative) {
    // A literal ending in '@' would fuse with the separator.
    if (!out.empty() && out.back() == '@') out += ' ';
    out += "@@";
    out += PrintPattern(*ast.negative, tokenizer);
  }
  return out;
}

std::string DescribePattern(const PatternNode& node) {
  switch (node.kind) {
    case PatternNode::Kind::kTokenLiteral: {
      std::string out = "Lit[";
      for (std::size_t i = 0; i < node.tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += node.tokens[i];
      }
      return out + "]";
    }
    case PatternNode::Kind::kGap:
      return "Gap(" + std::to_string(node.distance) + ")";
    case PatternNode::Kind::kConcat:
    case PatternNode::Kind::kAlternation: {
      std::string out =
          node.kind == PatternNode::Kind::kConcat ? "Concat(" : "Alt(";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i > 0) out += ", ";
        out += DescribePattern(node.children[i]);
      }
      return out + ")";
    }
  }
  return {};
}

std::vector<RuleSource> ReadRuleFile(std::istream& in,
                                     const std::string& name) {
  std::vector<RuleSource> rules;
  std::map<std::string, int> per_label;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t lead = 0;
    while (lead < line.size() && utf8::IsAsciiSpace(line[lead])) ++lead;
    if (lead == line.size() || line[lead] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kBadLine,
                  name + ":" + std::to_string(line_no) +
                      ": expected 'label<TAB>rule'",
                  line_no);
    }
    RuleSource src;
    src.label = line.substr(0, tab);
    src.text = line.substr(tab + 1);
    while (!src.text.empty() && utf8::IsAsciiSpace(src.text.back())) {
      src.text.pop_back();
    }
    if (src.label.empty()) {
      throw Error(ErrorCode::kEmptyLabel,
                  name + ":" + std::to_string(line_no) + ": empty label",
                  line_no);
    }
    src.id = src.label + "/" + std::to_string(++per_label[src.label]);
    rules.push_back(std::move(src));
  }
  return rules;
}

std::vector<RuleSource> LoadRuleFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open rule file '" + path + "'");
  return ReadRuleFile(in, path);
}

}  // namespace nre
