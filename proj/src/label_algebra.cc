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

#include "label_algebra.h"

#include <algorithm>
#include <bit>

#include "error.h"

namespace nre {

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

SpanSet::SpanSet(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

bool SpanSet::empty() const {
  return std::all_of(bits_.begin(), bits_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t SpanSet::count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += std::popcount(w);
  return total;
}

void SpanSet::Add(std::size_t start, std::size_t end) {
  bits_[start * words_ + end / 64] |= std::uint64_t{1} << (end % 64);
}

bool SpanSet::Contains(std::size_t start, std::size_t end) const {
  return (bits_[start * words_ + end / 64] >> (end % 64)) & 1;
}

void SpanSet::UnionWith(const SpanSet& other) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
}

std::span<const std::uint64_t> SpanSet::Row(std::size_t start) const {
  return {bits_.data() + start * words_, words_};
}

std::span<std::uint64_t> SpanSet::MutableRow(std::size_t start) {
  return {bits_.data() + start * words_, words_};
}

std::vector<std::pair<std::size_t, std::size_t>> SpanSet::ToVector() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t e = 0; e < n_; ++e) {
      if (Contains(s, e)) out.emplace_back(s, e);
    }
  }
  return out;
}

double LabelSeq::Sum() const {
  double total = 0;
  for (double v : values) total += v;
  return total;
}

std::vector<std::size_t> LabelSeq::MarkedPositions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= 0.5) out.push_back(i);
  }
  return out;
}

LabelSeq LabelSeq::Zeros(std::size_t n, Polarity polarity) {
  LabelSeq seq;
  seq.values.assign(n, 0.0);
  seq.polarity = polarity;
  seq.spans = SpanSet(n);
  return seq;
}

LabelSeq LabelSeq::FromDecisions(std::span<const int> decisions,
                                 Polarity polarity,
                                 std::size_t pattern_length) {
  const std::size_t n = decisions.size();
  LabelSeq seq = Zeros(n, polarity);
  for (std::size_t i = 0; i < n; ++i) {
    if (decisions[i] == 0) continue;
    seq.values[i] = 1.0;
    if (pattern_length <= 1) {
      seq.spans.Add(i, i);
    } else if (i == 0 || decisions[i - 1] == 0) {
      std::size_t end = i;
      while (end + 1 < n && decisions[end + 1] != 0) ++end;
      seq.spans.Add(i, end);
    }
  }
  return seq;
}

LabelSeq FindExact(std::span<const std::string> tokens,
                   std::span<const std::string> pattern, Polarity polarity) {
  if (pattern.empty()) {
    throw Error(ErrorCode::kEmptyPattern, "find pattern is empty");
  }
  LabelSeq seq = LabelSeq::Zeros(tokens.size(), polarity);
  if (pattern.size() > tokens.size()) return seq;
  for (std::size_t i = 0; i + pattern.size() <= tokens.size(); ++i) {
    if (!std::equal(pattern.begin(), pattern.end(), tokens.begin() + i)) {
      continue;
    }
    for (std::size_t k = 0; k < pattern.size(); ++k) seq.values[i + k] = 1.0;
    seq.spans.Add(i, i + pattern.size() - 1);
  }
  return seq;
}

namespace {

void CheckSameShape(const LabelSeq& a, const LabelSeq& b, bool polarity) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "label sequences of length " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  if (polarity && a.polarity != b.polarity) {
    throw Error(ErrorCode::kPolarityMismatch,
                "operands are " + std::string(PolarityName(a.polarity)) +
                    " and " + std::string(PolarityName(b.polarity)));
  }
}

// Which tokens a sequence marks. Soft sequences carry probabilities in
// `values`, so their marks come from the spans instead.
std::vector<bool> Marks(const LabelSeq& s) {
  std::vector<bool> marks(s.size(), false);
  if (s.binary) {
    for (std::size_t i = 0; i < s.size(); ++i) marks[i] = s.values[i] >= 0.5;
    return marks;
  }
  for (const auto& [start, end] : s.spans.ToVector()) {
    for (std::size_t k = start; k <= end; ++k) marks[k] = true;
  }
  return marks;
}

bool AnyBit(std::span<const std::uint64_t> words) {
  return std::any_of(words.begin(), words.end(),
                     [](std::uint64_t w) { return w != 0; });
}

}  // namespace

LabelSeq AndOrdered(const LabelSeq& a, const LabelSeq& b, int distance) {
  CheckSameShape(a, b, /*polarity=*/true);
  if (distance < -1) {
    throw Error(ErrorCode::kInvalidDistance,
                "distance must be -1 or >= 0, got " + std::to_string(distance));
  }
  const std::size_t n = a.size();
  LabelSeq out = LabelSeq::Zeros(n, a.polarity);
  if (n == 0) return out;

  // starts_by_end[e] = starts of the spans of `a` that end at e.
  const std::size_t words = a.spans.words_per_row();
  std::vector<std::uint64_t> starts_by_end(n * words, 0);
  std::vector<bool> a_ends(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = a.spans.Row(s);
    for (std::size_t e = s; e < n; ++e) {
      if ((row[e / 64] >> (e % 64)) & 1) {
        starts_by_end[e * words + s / 64] |= std::uint64_t{1} << (s % 64);
        a_ends[e] = true;
      }
    }
  }

  std::vector<bool> valid_end(n, false);
  std::vector<bool> valid_start(n, false);
  std::vector<std::uint64_t> starts(words);
  for (std::size_t sb = 1; sb < n; ++sb) {
    const auto b_row = b.spans.Row(sb);
    if (!AnyBit(b_row)) continue;
    const std::size_t lo =
        distance < 0 ? 0
                     : (sb >= static_cast<std::size_t>(distance) + 1
                            ? sb - 1 - static_cast<std::size_t>(distance)
                            : 0);
    std::fill(starts.begin(), starts.end(), 0);
    bool any = false;
    for (std::size_t e = lo; e < sb; ++e) {
      if (!a_ends[e]) continue;
      any = true;
      valid_end[e] = true;
      for (std::size_t w = 0; w < words; ++w) {
        starts[w] |= starts_by_end[e * words + w];
      }
    }
    if (!any) continue;
    valid_start[sb] = true;
    for (std::size_t s = 0; s < n; ++s) {
      if (!((starts[s / 64] >> (s % 64)) & 1)) continue;
      auto row = out.spans.MutableRow(s);
      for (std::size_t w = 0; w < words; ++w) row[w] |= b_row[w];
    }
  }

  // Supporting tokens: marked tokens inside participating spans.
  std::vector<bool> cover_a(n, false);
  std::vector<bool> cover_b(n, false);
  for (std::size_t e = 0; e < n; ++e) {
    if (!valid_end[e]) continue;
    std::size_t first = e;
    for (std::size_t s = 0; s <= e; ++s) {
      if ((starts_by_end[e * words + s / 64] >> (s % 64)) & 1) {
        first = s;
        break;
      }
    }
    for (std::size_t k = first; k <= e; ++k) cover_a[k] = true;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!valid_start[s]) continue;
    const auto row = b.spans.Row(s);
    std::size_t last = s;
    for (std::size_t e = n; e-- > s;) {
      if ((row[e / 64] >> (e % 64)) & 1) {
        last = e;
        break;
      }
    }
    for (std::size_t k = s; k <= last; ++k) cover_b[k] = true;
  }
  const auto marks_a = Marks(a);
  const auto marks_b = Marks(b);
  for (std::size_t k = 0; k < n; ++k) {
    if ((cover_a[k] && marks_a[k]) || (cover_b[k] && marks_b[k])) {
      out.values[k] = 1.0;
    }
  }
  return out;
}

LabelSeq AndUnordered(const LabelSeq& a, const LabelSeq& b) {
  CheckSameShape(a, b, /*polarity=*/true);
  LabelSeq out = LabelSeq::Zeros(a.size(), a.polarity);
  if (a.spans.empty() || b.spans.empty()) return out;
  const auto marks_a = Marks(a);
  const auto marks_b = Marks(b);
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.values[k] = (marks_a[k] || marks_b[k]) ? 1.0 : 0.0;
  }
  out.spans = a.spans;
  out.spans.UnionWith(b.spans);
  return out;
}

LabelSeq Guard(const LabelSeq& positive, const LabelSeq& negative) {
  CheckSameShape(positive, negative, /*polarity=*/false);
  if (positive.polarity != Polarity::kPositive ||
      negative.polarity != Polarity::kNegative) {
    throw Error(ErrorCode::kPolarityMismatch,
                "guard needs a positive and a negative operand");
  }
  if (!negative.spans.empty()) {
    return LabelSeq::Zeros(positive.size(), Polarity::kPositive);
  }
  LabelSeq out = positive;
  out.probabilities.clear();
  return out;
}

LabelSeq OrCombine(const LabelSeq& a, const LabelSeq& b) {
  CheckSameShape(a, b, /*polarity=*/true);
  LabelSeq out = LabelSeq::Zeros(a.size(), a.polarity);
  const auto marks_a = Marks(a);
  const auto marks_b = Marks(b);
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.values[k] = (marks_a[k] || marks_b[k]) ? 1.0 : 0.0;
  }
  out.spans = a.spans;
  out.spans.UnionWith(b.spans);
  return out;
}

int OutputMax(const LabelSeq& a) {
  double best = 0.0;
  for (double v : a.values) best = std::max(best, v);
  return best >= 0.5 ? 1 : 0;
}

}  // namespace nre
