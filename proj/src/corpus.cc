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

#include "corpus.h"

#include <fstream>
#include <unordered_map>

#include "utf8.h"

namespace nre {

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && utf8::IsAsciiSpace(s[b])) ++b;
  while (e > b && utf8::IsAsciiSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<CorpusRecord> ReadCorpus(std::istream& in,
                                     const Tokenizer& tokenizer,
                                     const std::string& name) {
  std::vector<CorpusRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](ErrorCode code, const std::string& what) {
    throw Error(code, name + ":" + std::to_string(line_no) + ": " + what,
                line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto first = line.find('\t');
    const auto second =
        first == std::string::npos ? first : line.find('\t', first + 1);
    if (second == std::string::npos) bad(ErrorCode::kBadLine, "expected 'id<TAB>labels<TAB>text'");
    CorpusRecord record;
    record.id = Trim(std::string_view(line).substr(0, first));
    if (record.id.empty()) bad(ErrorCode::kBadLine, "empty id");
    const std::string labels = line.substr(first + 1, second - first - 1);
    std::size_t pos = 0;
    while (pos <= labels.size()) {
      auto comma = labels.find(',', pos);
      if (comma == std::string::npos) comma = labels.size();
      std::string label = Trim(std::string_view(labels).substr(pos, comma - pos));
      if (!label.empty()) record.gold_labels.insert(std::move(label));
      pos = comma + 1;
    }
    record.text = line.substr(second + 1);
    try {
      record.tokens = tokenizer.Tokenize(record.text);
    } catch (const Error& e) {
      bad(e.code(), e.what());
    }
    if (record.tokens.empty()) bad(ErrorCode::kBadLine, "text has no tokens");
    if (!seen.emplace(record.id, line_no).second) {
      bad(ErrorCode::kDuplicateId, "duplicate id '" + record.id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<CorpusRecord> LoadCorpus(const std::string& path,
                                     const Tokenizer& tokenizer) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus '" + path + "'");
  return ReadCorpus(in, tokenizer, path);
}

std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0 || !std::isfinite(r)) {
      throw Error(ErrorCode::kRatioSum, "ratios must be finite and >= 0");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kRatioSum,
                "ratios sum to " + std::to_string(sum) + ", not 1");
  }
  // The small epsilon keeps 0.1 * 10 from flooring to 0.
  auto part = [&](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t validation = part(ratios[1]);
  const std::size_t test = std::min(part(ratios[2]), n - validation);
  return {n - validation - test, validation, test};
}

}  // namespace nre
