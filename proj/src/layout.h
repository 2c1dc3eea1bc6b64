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

#ifndef NRE_LAYOUT_H_
#define NRE_LAYOUT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "label_algebra.h"
#include "rule_dialect.h"
#include "tokenizer.h"

namespace nre {

enum class Action {
  kFindPositive,
  kFindNegative,
  kAndOrdered,
  kAndUnordered,
  kOr,
  kOutput,
};

// "Find_Positive", "And_Ordered", ...
std::string_view ActionName(Action action);

struct Instruction {
  Action action = Action::kOutput;
  std::vector<std::string> pattern;  // Find only
  int distance = -1;                 // And_Ordered only

  static Instruction FindPositive(std::vector<std::string> pattern);
  static Instruction FindNegative(std::vector<std::string> pattern);
  static Instruction AndOrdered(int distance);
  static Instruction AndUnordered();
  static Instruction Or();
  static Instruction Output();

  bool is_find() const {
    return action == Action::kFindPositive || action == Action::kFindNegative;
  }

  bool operator==(const Instruction&) const = default;
};

struct RpnProgram {
  std::vector<Instruction> instructions;
  std::string source_rule_id;

  bool operator==(const RpnProgram&) const = default;
};

struct LayoutConfig {
  // Split multi-token literals into single-token Finds chained by
  // And_Ordered(0).
  bool decompose_literals = true;
  // Longest n-gram given to one Find when literals are not decomposed;
  // longer literals are chunked.
  int max_find_ngram = 3;
};

// Post-order walk of the positive tree, then the negative tree, joined by
// And_Unordered when a negative tree exists, then Output.
RpnProgram Linearize(const RuleAst& ast, const LayoutConfig& config = {});

// Throws Error with the offending instruction index as position:
// StackUnderflow, TrailingValues, MisplacedOutput, MixedPolarityOr,
// MixedPolarityOrdered, NegativeOutput, EmptyPattern, InvalidDistance.
void Validate(const RpnProgram& program);

// Space separated "param Action" pairs, e.g.
//   打 Find_Positive 墙 Find_Positive 0 And_Ordered Output
std::string ToText(const RpnProgram& program, const Tokenizer& tokenizer);

// Supplies Find results, either exact or soft.
class FindProvider {
 public:
  virtual ~FindProvider() = default;

  virtual LabelSeq Find(std::span<const std::string> tokens,
                        std::span<const std::string> pattern,
                        Polarity polarity) const = 0;
};

class ExactFindProvider : public FindProvider {
 public:
  LabelSeq Find(std::span<const std::string> tokens,
                std::span<const std::string> pattern,
                Polarity polarity) const override;
};

struct TraceEntry {
  Instruction instruction;
  LabelSeq output;
  // And_Unordered joined positive and negative evidence and the negative
  // side fired.
  bool guard_fired = false;
};

struct MatchResult {
  bool matched = false;
  LabelSeq root_labels;
  std::vector<TraceEntry> trace;
};

// Runs a validated program on one case. Errors from the provider that are
// not nre::Error are reported as MatcherFailure.
MatchResult Execute(const RpnProgram& program,
                    std::span<const std::string> tokens,
                    const FindProvider& provider);

}  // namespace nre

#endif  // NRE_LAYOUT_H_
