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
#include <gtest/gtest.h>

#include "error.h"
#include "label_algebra.h"

namespace nre {
namespace {

using Toks = std::vector<std::string>;

LabelSeq Seq(std::vector<int> bits, Polarity pol = Polarity::kPositive) {
  return LabelSeq::FromDecisions(bits, pol, 1);
}

std::vector<int> Bits(const LabelSeq& s) {
  std::vector<int> out;
  for (double v : s.values) out.push_back(v >= 0.5 ? 1 : 0);
  return out;
}

using V = std::vector<int>;

TEST(FindExactTest, MarksEveryOccurrence) {
  const Toks fig3 = {"The", "<e1>", "island", "</e1>", "was", "farmed", "for",
                     "<e2>"};
  EXPECT_EQ(Bits(FindExact(fig3, Toks{"farmed", "for"})),
            (V{0, 0, 0, 0, 0, 1, 1, 0}));
  EXPECT_EQ(Bits(FindExact(Toks{"a", "b"}, Toks{"c"})), (V{0, 0}));
  EXPECT_EQ(Bits(FindExact(Toks{"a", "a"}, Toks{"a"})), (V{1, 1}));
}

TEST(FindExactTest, OverlappingOccurrencesAreSeparateSpans) {
  const LabelSeq s = FindExact(Toks{"a", "a", "a"}, Toks{"a", "a"});
  EXPECT_EQ(Bits(s), (V{1, 1, 1}));
  EXPECT_TRUE(s.spans.Contains(0, 1));
  EXPECT_TRUE(s.spans.Contains(1, 2));
  EXPECT_FALSE(s.spans.Contains(0, 2));
}

TEST(FindExactTest, EmptyPatternThrows) {
  EXPECT_THROW(FindExact(Toks{"a"}, Toks{}), Error);
}

TEST(AndOrderedTest, Examples) {
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 0, 0}), Seq({0, 0, 1}), 0)), (V{0, 0, 0}));
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 0, 0}), Seq({0, 1, 0}), 0)), (V{1, 1, 0}));
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 0, 0}), Seq({0, 0, 1}), 1)), (V{1, 0, 1}));
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 0, 0}), Seq({0, 0, 1}), -1)), (V{1, 0, 1}));
}

TEST(AndOrderedTest, PaperLeftBranchOutput) {
  const Toks fig3 = {"The", "<e1>", "island", "</e1>", "was", "farmed", "for",
                     "<e2>"};
  const LabelSeq merged = AndOrdered(FindExact(fig3, Toks{"island"}),
                                     FindExact(fig3, Toks{"</e1>"}), -1);
  EXPECT_EQ(Bits(merged), (V{0, 0, 1, 1, 0, 0, 0, 0}));
}

TEST(AndOrderedTest, RequiresStrictOrder) {
  EXPECT_EQ(Bits(AndOrdered(Seq({0, 1}), Seq({1, 0}), -1)), (V{0, 0}));
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 0}), Seq({1, 0}), -1)), (V{0, 0}));
}

TEST(AndOrderedTest, MarksOnlyEndpointsOfValidPairs) {
  EXPECT_EQ(Bits(AndOrdered(Seq({1, 1, 0, 0}), Seq({0, 0, 0, 1}), 1)),
            (V{0, 1, 0, 1}));
}

TEST(AndOrderedTest, ChainsKeepSpanStructure) {
  // "a b .* c" must not match "b a c": the left chain has no a-b span.
  const Toks c = {"b", "a", "c"};
  const LabelSeq ab =
      AndOrdered(FindExact(c, Toks{"a"}), FindExact(c, Toks{"b"}), 0);
  EXPECT_EQ(Bits(AndOrdered(ab, FindExact(c, Toks{"c"}), -1)), (V{0, 0, 0}));
  const Toks d = {"a", "b", "x", "c"};
  const LabelSeq ab2 =
      AndOrdered(FindExact(d, Toks{"a"}), FindExact(d, Toks{"b"}), 0);
  EXPECT_EQ(Bits(AndOrdered(ab2, FindExact(d, Toks{"c"}), -1)),
            (V{1, 1, 0, 1}));
  EXPECT_EQ(Bits(AndOrdered(ab2, FindExact(d, Toks{"c"}), 0)), (V{0, 0, 0, 0}));
}

TEST(AndOrderedTest, Errors) {
  try {
    AndOrdered(Seq({1}), Seq({1, 0}), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  try {
    AndOrdered(Seq({1, 0}), Seq({0, 1}, Polarity::kNegative), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPolarityMismatch);
  }
}

TEST(AndUnorderedTest, Examples) {
  EXPECT_EQ(Bits(AndUnordered(Seq({1, 0}), Seq({0, 1}))), (V{1, 1}));
  EXPECT_EQ(Bits(AndUnordered(Seq({1, 0}), Seq({0, 0}))), (V{0, 0}));
  EXPECT_EQ(Bits(AndUnordered(Seq({1, 1}), Seq({1, 0}))), (V{1, 1}));
}

TEST(GuardTest, Examples) {
  const auto neg = [](V v) { return Seq(std::move(v), Polarity::kNegative); };
  EXPECT_EQ(Bits(Guard(Seq({1, 0}), neg({0, 0}))), (V{1, 0}));
  EXPECT_EQ(Bits(Guard(Seq({1, 0}), neg({0, 1}))), (V{0, 0}));
  EXPECT_EQ(Bits(Guard(Seq({0, 0}), neg({0, 0}))), (V{0, 0}));
  EXPECT_EQ(Guard(Seq({1, 0}), neg({0, 1})).polarity, Polarity::kPositive);
}

TEST(OrCombineTest, Examples) {
  EXPECT_EQ(Bits(OrCombine(Seq({1, 0}), Seq({0, 1}))), (V{1, 1}));
  EXPECT_EQ(Bits(OrCombine(Seq({0, 0}), Seq({0, 0}))), (V{0, 0}));
  EXPECT_EQ(Bits(OrCombine(Seq({1, 1}), Seq({1, 0}))), (V{1, 1}));
  const LabelSeq n = OrCombine(Seq({1, 0}, Polarity::kNegative),
                               Seq({0, 0}, Polarity::kNegative));
  EXPECT_EQ(n.polarity, Polarity::kNegative);
  EXPECT_THROW(OrCombine(Seq({1, 0}), Seq({0, 1}, Polarity::kNegative)), Error);
}

TEST(OutputMaxTest, Examples) {
  EXPECT_EQ(OutputMax(Seq({0, 1, 0})), 1);
  EXPECT_EQ(OutputMax(Seq({0, 0, 0})), 0);
  LabelSeq soft = Seq({0, 0});
  soft.values = {0.2, 0.4};
  soft.binary = false;
  EXPECT_EQ(OutputMax(soft), 0);
  soft.values = {0.2, 0.5};
  EXPECT_EQ(OutputMax(soft), 1);
}

TEST(FromDecisionsTest, SpansPerPatternLength) {
  const std::vector<int> d = {1, 1, 0, 1};
  const LabelSeq single = LabelSeq::FromDecisions(d, Polarity::kPositive, 1);
  EXPECT_EQ(single.spans.count(), 3u);
  EXPECT_TRUE(single.spans.Contains(1, 1));
  const LabelSeq runs = LabelSeq::FromDecisions(d, Polarity::kPositive, 2);
  EXPECT_EQ(runs.spans.count(), 2u);
  EXPECT_TRUE(runs.spans.Contains(0, 1));
  EXPECT_TRUE(runs.spans.Contains(3, 3));
}

TEST(SpanSetTest, WideRows) {
  SpanSet s(130);
  s.Add(0, 129);
  s.Add(64, 64);
  EXPECT_TRUE(s.Contains(0, 129));
  EXPECT_TRUE(s.Contains(64, 64));
  EXPECT_FALSE(s.Contains(0, 128));
  EXPECT_EQ(s.count(), 2u);
  SpanSet t(130);
  t.Add(3, 5);
  t.UnionWith(s);
  EXPECT_EQ(t.ToVector().size(), 3u);
}

}  // namespace
}  // namespace nre
