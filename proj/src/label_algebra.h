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

#ifndef NRE_LABEL_ALGEBRA_H_
#define NRE_LABEL_ALGEBRA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nre {

enum class Polarity { kPositive, kNegative };

std::string_view PolarityName(Polarity polarity);

// Set of evidence spans [start, end] over a case of n tokens, stored as an
// n x n bit matrix indexed by start.
class SpanSet {
 public:
  SpanSet() = default;
  explicit SpanSet(std::size_t n);

  std::size_t length() const { return n_; }
  bool empty() const;
  std::size_t count() const;

  void Add(std::size_t start, std::size_t end);
  bool Contains(std::size_t start, std::size_t end) const;
  void UnionWith(const SpanSet& other);

  // Ends of the spans that start at `start`, as bit words.
  std::span<const std::uint64_t> Row(std::size_t start) const;
  std::span<std::uint64_t> MutableRow(std::size_t start);
  std::size_t words_per_row() const { return words_; }

  std::vector<std::pair<std::size_t, std::size_t>> ToVector() const;

  bool operator==(const SpanSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Per-token labels over one case, tagged with polarity.
//
// Exact sequences are binary. A soft Find may keep its probabilities in
// `values` (binary = false); the combining actions read a soft sequence
// through its spans, which are built from the thresholded labels.
struct LabelSeq {
  std::vector<double> values;
  Polarity polarity = Polarity::kPositive;
  bool binary = true;
  SpanSet spans;
  // Per-token probabilities from a soft Find, kept for explanation.
  std::vector<double> probabilities;

  std::size_t size() const { return values.size(); }
  double Sum() const;
  // Positions whose value is >= 0.5.
  std::vector<std::size_t> MarkedPositions() const;

  static LabelSeq Zeros(std::size_t n, Polarity polarity);

  // Builds a sequence from per-token 0/1 decisions. Single-token patterns
  // give one span per marked token; longer patterns give one span per
  // maximal run of marked tokens.
  static LabelSeq FromDecisions(std::span<const int> decisions,
                                Polarity polarity, std::size_t pattern_length);

  bool operator==(const LabelSeq&) const = default;
};

// Marks every token inside an occurrence of `pattern` as a contiguous
// subsequence of the case; each occurrence is one span.
LabelSeq FindExact(std::span<const std::string> tokens,
                   std::span<const std::string> pattern,
                   Polarity polarity = Polarity::kPositive);

// Pairs the end of a span of `a` with the start of a later span of `b`
// when the number of tokens strictly between them is at most `distance`
// (any number when distance is -1). The result holds the joined spans and
// marks the tokens of `a` and `b` that support some valid pair.
LabelSeq AndOrdered(const LabelSeq& a, const LabelSeq& b, int distance);

// (a + b) clamped at 1 if both sides carry evidence, else all zeros.
// Operands must share polarity; the mixed case is Guard().
LabelSeq AndUnordered(const LabelSeq& a, const LabelSeq& b);

// Positive evidence survives only when the negative side is empty.
LabelSeq Guard(const LabelSeq& positive, const LabelSeq& negative);

LabelSeq OrCombine(const LabelSeq& a, const LabelSeq& b);

// max(values) thresholded at 0.5.
int OutputMax(const LabelSeq& a);

}  // namespace nre

#endif  // NRE_LABEL_ALGEBRA_H_
