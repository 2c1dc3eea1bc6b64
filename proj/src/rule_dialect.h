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

#ifndef NRE_RULE_DIALECT_H_
#define NRE_RULE_DIALECT_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "tokenizer.h"

namespace nre {

struct RuleSource {
  std::string id;
  std::string label;
  std::string text;

  bool operator==(const RuleSource&) const = default;
};

// One node of a positive or negative pattern tree.
//
// A Concat alternates non-gap children with Gap children and never starts
// or ends with a Gap. Gap distance -1 comes from ".*"; d >= 0 from "{,d}",
// with plain adjacency encoded as Gap(0).
struct PatternNode {
  enum class Kind { kTokenLiteral, kGap, kConcat, kAlternation };

  Kind kind = Kind::kTokenLiteral;
  std::vector<std::string> tokens;
  int distance = 0;
  std::vector<PatternNode> children;

  static PatternNode Literal(std::vector<std::string> tokens);
  static PatternNode Gap(int distance);
  static PatternNode Concat(std::vector<PatternNode> children);
  static PatternNode Alternation(std::vector<PatternNode> branches);

  bool operator==(const PatternNode&) const = default;
};

struct RuleAst {
  PatternNode positive;
  std::optional<PatternNode> negative;
  RuleSource source;
};

// Same pattern trees, ignoring the source text.
bool StructurallyEqual(const RuleAst& a, const RuleAst& b);

// Parses "positive@@negative". Alternation needs parentheses on the
// positive side; a bare top-level "|" is accepted on the negative side.
RuleAst ParseRule(const RuleSource& source, const Tokenizer& tokenizer);

std::string PrintPattern(const PatternNode& node, const Tokenizer& tokenizer);

// Dialect text that parses back to the same trees.
std::string PrintCanonical(const RuleAst& ast, const Tokenizer& tokenizer);

// Debug rendering, e.g. Concat(Lit[a], Gap(-1), Alt(Lit[b], Lit[c])).
std::string DescribePattern(const PatternNode& node);

// Rule file: "label<TAB>rule-text" per line, "#" comments and blank lines
// skipped. Rule ids are "<label>/<k>" with k counting rules per label.
std::vector<RuleSource> ReadRuleFile(std::istream& in,
                                     const std::string& name = "<rules>");
std::vector<RuleSource> LoadRuleFile(const std::string& path);

}  // namespace nre

#endif  // NRE_RULE_DIALECT_H_
