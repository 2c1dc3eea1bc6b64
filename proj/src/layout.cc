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

#include "layout.h"

#include <algorithm>
#include <optional>

#include "error.h"

namespace nre {

std::string_view ActionName(Action action) {
  switch (action) {
    case Action::kFindPositive: return "Find_Positive";
    case Action::kFindNegative: return "Find_Negative";
    case Action::kAndOrdered: return "And_Ordered";
    case Action::kAndUnordered: return "And_Unordered";
    case Action::kOr: return "Or";
    case Action::kOutput: return "Output";
  }
  return "?";
}

Instruction Instruction::FindPositive(std::vector<std::string> pattern) {
  return {Action::kFindPositive, std::move(pattern), -1};
}
Instruction Instruction::FindNegative(std::vector<std::string> pattern) {
  return {Action::kFindNegative, std::move(pattern), -1};
}
Instruction Instruction::AndOrdered(int distance) {
  return {Action::kAndOrdered, {}, distance};
}
Instruction Instruction::AndUnordered() {
  return {Action::kAndUnordered, {}, -1};
}
Instruction Instruction::Or() { return {Action::kOr, {}, -1}; }
Instruction Instruction::Output() { return {Action::kOutput, {}, -1}; }

namespace {

class Linearizer {
 public:
  Linearizer(const LayoutConfig& config, std::vector<Instruction>* out)
      : config_(config), out_(out) {}

  void Emit(const PatternNode& node, Polarity polarity) {
    switch (node.kind) {
      case PatternNode::Kind::kTokenLiteral:
        EmitLiteral(node.tokens, polarity);
        break;
      case PatternNode::Kind::kConcat:
        Emit(node.children.front(), polarity);
        for (std::size_t i = 1; i + 1 < node.children.size(); i += 2) {
          Emit(node.children[i + 1], polarity);
          out_->push_back(Instruction::AndOrdered(node.children[i].distance));
        }
        break;
      case PatternNode::Kind::kAlternation:
        Emit(node.children.front(), polarity);
        for (std::size_t i = 1; i < node.children.size(); ++i) {
          Emit(node.children[i], polarity);
          out_->push_back(Instruction::Or());
        }
        break;
      case PatternNode::Kind::kGap:
        break;  // only ever inside a Concat
    }
  }

 private:
  void EmitLiteral(const std::vector<std::string>& tokens,
                   Polarity polarity) {
    const std::size_t chunk =
        config_.decompose_literals
            ? 1
            : static_cast<std::size_t>(std::max(1, config_.max_find_ngram));
    for (std::size_t i = 0; i < tokens.size(); i += chunk) {
      const std::size_t end = std::min(tokens.size(), i + chunk);
      std::vector<std::string> gram(tokens.begin() + i, tokens.begin() + end);
      out_->push_back(polarity == Polarity::kPositive
                          ? Instruction::FindPositive(std::move(gram))
                          : Instruction::FindNegative(std::move(gram)));
      if (i > 0) out_->push_back(Instruction::AndOrdered(0));
    }
  }

  const LayoutConfig& config_;
  std::vector<Instruction>* out_;
};

}  // namespace

RpnProgram Linearize(const RuleAst& ast, const LayoutConfig& config) {
  RpnProgram program;
  program.source_rule_id = ast.source.id;
  Linearizer linearizer(config, &program.instructions);
  linearizer.Emit(ast.positive, Polarity::kPositive);
  if (ast.negative) {
    linearizer.Emit(*ast.negative, Polarity::kNegative);
    program.instructions.push_back(Instruction::AndUnordered());
  }
  program.instructions.push_back(Instruction::Output());
  return program;
}

void Validate(const RpnProgram& program) {
  std::vector<Polarity> stack;
  const auto& code = program.instructions;
  auto fail = [](ErrorCode error, const std::string& what, std::size_t at) {
    throw Error(error, what + " at instruction " + std::to_string(at), at);
  };
  auto pop2 = [&](std::size_t at) {
    if (stack.size() < 2) fail(ErrorCode::kStackUnderflow, "stack underflow", at);
    const Polarity rhs = stack.back();
    stack.pop_back();
    const Polarity lhs = stack.back();
    stack.pop_back();
    return std::make_pair(lhs, rhs);
  };
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instruction& ins = code[i];
    switch (ins.action) {
      case Action::kFindPositive:
      case Action::kFindNegative:
        if (ins.pattern.empty()) fail(ErrorCode::kEmptyPattern, "empty pattern", i);
        stack.push_back(ins.action == Action::kFindPositive
                            ? Polarity::kPositive
                            : Polarity::kNegative);
        break;
      case Action::kAndOrdered: {
        if (ins.distance < -1) {
          fail(ErrorCode::kInvalidDistance, "distance below -1", i);
        }
        auto [lhs, rhs] = pop2(i);
        if (lhs != rhs) {
          fail(ErrorCode::kMixedPolarityOrdered, "mixed polarity operands", i);
        }
        stack.push_back(lhs);
        break;
      }
      case Action::kOr: {
        auto [lhs, rhs] = pop2(i);
        if (lhs != rhs) {
          fail(ErrorCode::kMixedPolarityOr, "mixed polarity operands", i);
        }
        stack.push_back(lhs);
        break;
      }
      case Action::kAndUnordered: {
        auto [lhs, rhs] = pop2(i);
        // Mixed operands form a guard whose result is positive.
        stack.push_back(lhs == rhs ? lhs : Polarity::kPositive);
        break;
      }
      case Action::kOutput:
        if (i + 1 != code.size()) {
          fail(ErrorCode::kMisplacedOutput, "Output before the end", i);
        }
        if (stack.empty()) fail(ErrorCode::kStackUnderflow, "stack underflow", i);
        if (stack.size() > 1) {
          fail(ErrorCode::kTrailingValues,
               std::to_string(stack.size() - 1) + " values left on the stack",
               i);
        }
        if (stack.back() != Polarity::kPositive) {
          fail(ErrorCode::kNegativeOutput, "Output of negative evidence", i);
        }
        stack.pop_back();
        break;
    }
  }
  if (code.empty() || code.back().action != Action::kOutput) {
    fail(ErrorCode::kMisplacedOutput, "program does not end with Output",
         code.empty() ? 0 : code.size() - 1);
  }
}

std::string ToText(const RpnProgram& program, const Tokenizer& tokenizer) {
  std::string out;
  for (const auto& ins : program.instructions) {
    if (!out.empty()) out += ' ';
    if (ins.is_find()) {
      out += tokenizer.Join(ins.pattern);
      out += ' ';
    } else if (ins.action == Action::kAndOrdered) {
      out += std::to_string(ins.distance);
      out += ' ';
    }
    out += ActionName(ins.action);
  }
  return out;
}

LabelSeq ExactFindProvider::Find(std::span<const std::string> tokens,
                                 std::span<const std::string> pattern,
                                 Polarity polarity) const {
  return FindExact(tokens, pattern, polarity);
}

MatchResult Execute(const RpnProgram& program,
                    std::span<const std::string> tokens,
                    const FindProvider& provider) {
  if (tokens.empty()) throw Error(ErrorCode::kCaseEmpty, "case has no tokens");
  MatchResult result;
  result.trace.reserve(program.instructions.size());
  std::vector<LabelSeq> stack;
  auto pop = [&] {
    if (stack.empty()) {
      throw Error(ErrorCode::kStackUnderflow, "stack underflow",
                  result.trace.size());
    }
    LabelSeq top = std::move(stack.back());
    stack.pop_back();
    return top;
  };
  for (const auto& ins : program.instructions) {
    TraceEntry entry;
    entry.instruction = ins;
    switch (ins.action) {
      case Action::kFindPositive:
      case Action::kFindNegative: {
        const Polarity polarity = ins.action == Action::kFindPositive
                                      ? Polarity::kPositive
                                      : Polarity::kNegative;
        try {
          entry.output = provider.Find(tokens, ins.pattern, polarity);
        } catch (const Error&) {
          throw;
        } catch (const std::exception& e) {
          throw Error(ErrorCode::kMatcherFailure, e.what(), result.trace.size());
        }
        if (entry.output.size() != tokens.size()) {
          throw Error(ErrorCode::kMatcherFailure,
                      "matcher returned a sequence of the wrong length",
                      result.trace.size());
        }
        break;
      }
      case Action::kAndOrdered: {
        LabelSeq rhs = pop();
        LabelSeq lhs = pop();
        entry.output = AndOrdered(lhs, rhs, ins.distance);
        break;
      }
      case Action::kOr: {
        LabelSeq rhs = pop();
        LabelSeq lhs = pop();
        entry.output = OrCombine(lhs, rhs);
        break;
      }
      case Action::kAndUnordered: {
        LabelSeq rhs = pop();
        LabelSeq lhs = pop();
        if (lhs.polarity == rhs.polarity) {
          entry.output = AndUnordered(lhs, rhs);
        } else {
          const LabelSeq& pos = lhs.polarity == Polarity::kPositive ? lhs : rhs;
          const LabelSeq& neg = lhs.polarity == Polarity::kPositive ? rhs : lhs;
          entry.guard_fired = !neg.spans.empty();
          entry.output = Guard(pos, neg);
        }
        break;
      }
      case Action::kOutput: {
        result.root_labels = pop();
        result.matched = OutputMax(result.root_labels) == 1;
        entry.output = result.root_labels;
        break;
      }
    }
    if (ins.action != Action::kOutput) stack.push_back(entry.output);
    result.trace.push_back(std::move(entry));
  }
  return result;
}

}  // namespace nre
