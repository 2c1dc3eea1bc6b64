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

#ifndef NRE_CORPUS_H_
#define NRE_CORPUS_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "error.h"
#include "random.h"
#include "tokenizer.h"

namespace nre {

struct CorpusRecord {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::set<std::string> gold_labels;
};

// "id<TAB>labels<TAB>text" per line; labels is a comma-separated, possibly
// empty list. Blank lines are skipped.
std::vector<CorpusRecord> ReadCorpus(std::istream& in,
                                     const Tokenizer& tokenizer,
                                     const std::string& name = "<corpus>");
std::vector<CorpusRecord> LoadCorpus(const std::string& path,
                                     const Tokenizer& tokenizer);

template <typename T>
struct Split {
  std::vector<T> train;
  std::vector<T> validation;
  std::vector<T> test;
};

// Validation and test get floor(n * ratio); the remainder goes to train.
std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      const std::array<double, 3>& ratios);

// Seeded shuffle, then contiguous slices train | validation | test.
template <typename T>
Split<T> SplitCorpus(std::vector<T> items, const std::array<double, 3>& ratios,
                     std::uint64_t seed) {
  const auto sizes = SplitSizes(items.size(), ratios);
  Rng rng(seed);
  rng.Shuffle(items);
  Split<T> out;
  auto it = std::make_move_iterator(items.begin());
  out.train.assign(it, it + sizes[0]);
  it += sizes[0];
  out.validation.assign(it, it + sizes[1]);
  it += sizes[1];
  out.test.assign(it, it + sizes[2]);
  return out;
}

}  // namespace nre

#endif  // NRE_CORPUS_H_
