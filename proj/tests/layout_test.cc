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
#include <stdexcept>

#include <gtest/gtest.h>

#include "error.h"
#include "layout.h"
#include "rule_dialect.h"

namespace nre {
namespace {

const Tokenizer kChar(TokenizerMode::kChar);
const Tokenizer kSpace(TokenizerMode::kWhitespace);

RpnProgram Compile(const std::string& text, const Tokenizer& tok,
                   LayoutConfig cfg = {}) {
  return Linearize(ParseRule({"r/1", "L", text}, tok), cfg);
}

ErrorCode ValidateError(std::vector<Instruction> code, std::size_t* at) {
  try {
    Validate({std::move(code), "x"});
  } catch (const Error& e) {
    *at = e.position();
    return e.code();
  }
  ADD_FAILURE() << "program validated";
  return ErrorCode::kInvalidArgument;
}

using I = Instruction;

TEST(LinearizeTest, PaperActionSequence) {
  const RpnProgram p = Compile("打墙洞@@", kChar);
  EXPECT_EQ(p.instructions,
            (std::vector<I>{I::FindPositive({"打"}), I::FindPositive({"墙"}),
                            I::AndOrdered(0), I::FindPositive({"洞"}),
                            I::AndOrdered(0), I::Output()}));
  EXPECT_EQ(ToText(p, kChar),
            "打 Find_Positive 墙 Find_Positive 0 And_Ordered 洞 Find_Positive "
            "0 And_Ordered Output");
}

TEST(LinearizeTest, SingleLeaf) {
  EXPECT_EQ(Compile("a@@", kSpace).instructions,
            (std::vector<I>{I::FindPositive({"a"}), I::Output()}));
}

TEST(LinearizeTest, GuardedRuleWithoutDecomposition) {
  LayoutConfig cfg;
  cfg.decompose_literals = false;
  EXPECT_EQ(Compile("入室@@死亡|工地", kChar, cfg).instructions,
            (std::vector<I>{I::FindPositive({"入", "室"}),
                            I::FindNegative({"死", "亡"}),
                            I::FindNegative({"工", "地"}), I::Or(),
                            I::AndUnordered(), I::Output()}));
  EXPECT_EQ(ToText(Compile("入室@@死亡|工地", kChar, cfg), kChar),
            "入室 Find_Positive 死亡 Find_Negative 工地 Find_Negative Or "
            "And_Unordered Output");
}

TEST(LinearizeTest, LongLiteralsAreChunked) {
  LayoutConfig cfg;
  cfg.decompose_literals = false;
  cfg.max_find_ngram = 2;
  EXPECT_EQ(Compile("a b c d e", kSpace, cfg).instructions,
            (std::vector<I>{I::FindPositive({"a", "b"}),
                            I::FindPositive({"c", "d"}), I::AndOrdered(0),
                            I::FindPositive({"e"}), I::AndOrdered(0),
                            I::Output()}));
}

TEST(LinearizeTest, GapsAndAlternation) {
  EXPECT_EQ(Compile("a .* (b|c) {,2} d", kSpace).instructions,
            (std::vector<I>{I::FindPositive({"a"}), I::FindPositive({"b"}),
                            I::FindPositive({"c"}), I::Or(), I::AndOrdered(-1),
                            I::FindPositive({"d"}), I::AndOrdered(2),
                            I::Output()}));
}

TEST(LinearizeTest, OutputIsValid) {
  for (const char* text :
       {"a", "a b c@@d", "(a|b c|d .* e) {,1} f@@g|h", "x@@(p .* q|r)"}) {
    EXPECT_NO_THROW(Validate(Compile(text, kSpace))) << text;
  }
}

TEST(ValidateTest, Examples) {
  std::size_t at = 0;
  EXPECT_NO_THROW(Validate({{I::FindPositive({"a"}), I::Output()}, "x"}));
  EXPECT_EQ(ValidateError({I::AndOrdered(0), I::Output()}, &at),
            ErrorCode::kStackUnderflow);
  EXPECT_EQ(at, 0u);
  EXPECT_EQ(ValidateError({I::FindPositive({"a"}), I::FindPositive({"b"}),
                           I::Output()},
                          &at),
            ErrorCode::kTrailingValues);
}

TEST(ValidateTest, StructuralErrors) {
  std::size_t at = 0;
  EXPECT_EQ(ValidateError({I::FindPositive({"a"}), I::Output(),
                           I::FindPositive({"b"})},
                          &at),
            ErrorCode::kMisplacedOutput);
  EXPECT_EQ(ValidateError({I::FindPositive({"a"})}, &at),
            ErrorCode::kMisplacedOutput);
  EXPECT_EQ(ValidateError({I::FindPositive({"a"}), I::FindNegative({"b"}),
                           I::Or(), I::Output()},
                          &at),
            ErrorCode::kMixedPolarityOr);
  EXPECT_EQ(at, 2u);
  EXPECT_EQ(ValidateError({I::FindPositive({"a"}), I::FindNegative({"b"}),
                           I::AndOrdered(0), I::Output()},
                          &at),
            ErrorCode::kMixedPolarityOrdered);
  EXPECT_EQ(ValidateError({I::FindNegative({"a"}), I::Output()}, &at),
            ErrorCode::kNegativeOutput);
  EXPECT_EQ(ValidateError({I::FindPositive({}), I::Output()}, &at),
            ErrorCode::kEmptyPattern);
  EXPECT_EQ(ValidateError({I::FindPositive({"a"}), I::FindPositive({"b"}),
                           I::AndOrdered(-2), I::Output()},
                          &at),
            ErrorCode::kInvalidDistance);
}

TEST(ExecuteTest, SingleLiteral) {
  const RpnProgram p = Compile("a@@", kSpace);
  const MatchResult r = Execute(p, std::vector<std::string>{"a"},
                                ExactFindProvider());
  EXPECT_TRUE(r.matched);
  EXPECT_EQ(r.root_labels.values, std::vector<double>{1.0});
  EXPECT_EQ(r.trace.size(), p.instructions.size());
}

TEST(ExecuteTest, GuardBlocksNegativeEvidence) {
  const RpnProgram p = Compile("入室@@死亡|工地", kChar);
  EXPECT_FALSE(Execute(p, kChar.Tokenize("入室致人死亡"), ExactFindProvider())
                   .matched);
  EXPECT_FALSE(Execute(p, kChar.Tokenize("入室工地"), ExactFindProvider())
                   .matched);
  EXPECT_TRUE(Execute(p, kChar.Tokenize("入室盗窃"), ExactFindProvider())
                  .matched);
}

TEST(ExecuteTest, PaperEntityRule) {
  const RpnProgram p = Compile(
      "island.*</e1>.*farmed for.*<e2>@@<e2>(year|profit).*</e2>", kSpace);
  const auto blocked = kSpace.Tokenize(
      "The <e1> island </e1> was farmed for <e2> year </e2> round");
  EXPECT_FALSE(Execute(p, blocked, ExactFindProvider()).matched);
  const auto allowed = kSpace.Tokenize(
      "The <e1> island </e1> was farmed for <e2> sheep </e2>");
  EXPECT_TRUE(Execute(p, allowed, ExactFindProvider()).matched);
}

TEST(ExecuteTest, EmptyCaseThrows) {
  try {
    Execute(Compile("a", kSpace), {}, ExactFindProvider());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCaseEmpty);
  }
}

class ThrowingProvider : public FindProvider {
 public:
  LabelSeq Find(std::span<const std::string>, std::span<const std::string>,
                Polarity) const override {
    throw std::runtime_error("backend down");
  }
};

TEST(ExecuteTest, MatcherFailurePropagates) {
  try {
    Execute(Compile("a", kSpace), std::vector<std::string>{"a"},
            ThrowingProvider());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMatcherFailure);
  }
}

TEST(ExecuteTest, DecompositionDoesNotChangeMatches) {
  LayoutConfig chunked;
  chunked.decompose_literals = false;
  const auto tokens = kSpace.Tokenize("x a b c y a b");
  for (const char* text : {"a b c", "a b .* y", "a b c d", "(a b|y) {,0} a"}) {
    EXPECT_EQ(
        Execute(Compile(text, kSpace), tokens, ExactFindProvider()).matched,
        Execute(Compile(text, kSpace, chunked), tokens, ExactFindProvider())
            .matched)
        << text;
  }
}

}  // namespace
}  // namespace nre
