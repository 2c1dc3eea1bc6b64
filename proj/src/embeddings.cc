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

#include "embeddings.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.h"

namespace nre {

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens,
                               Matrix vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(tokens_.size()) != vectors_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "token count does not match vector rows");
  }
  for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
    index_.emplace(tokens_[static_cast<std::size_t>(i)], i);
  }
}

const double* EmbeddingTable::Lookup(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return nullptr;
  return vectors_.row(it->second).data();
}

Eigen::VectorXd EmbeddingTable::Vector(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return Eigen::VectorXd::Zero(dimension());
  return vectors_.row(it->second).transpose();
}

namespace {

bool ParseDouble(std::string_view text, double* out) {
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

}  // namespace

EmbeddingTable ReadEmbeddings(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kBadHeader, name + ": missing header", 1);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitSpaces(line);
  long long count = 0;
  long long dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(),
                      count)
              .ptr != header[0].data() + header[0].size() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(),
                      dim)
              .ptr != header[1].data() + header[1].size() ||
      count < 0 || dim <= 0) {
    throw Error(ErrorCode::kBadHeader,
                name + ": header must be 'count dimension'", 1);
  }

  std::vector<std::string> tokens;
  std::vector<std::vector<double>> rows;
  std::unordered_map<std::string, bool> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = SplitSpaces(line);
    if (fields.empty()) continue;
    if (static_cast<long long>(fields.size()) != dim + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  name + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, found " +
                      std::to_string(fields.size() - 1),
                  line_no);
    }
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (long long k = 0; k < dim; ++k) {
      if (!ParseDouble(fields[k + 1], &row[k])) {
        throw Error(ErrorCode::kDimensionMismatch,
                    name + ":" + std::to_string(line_no) + ": bad number '" +
                        std::string(fields[k + 1]) + "'",
                    line_no);
      }
    }
    std::string token(fields[0]);
    if (seen.emplace(token, true).second) {
      tokens.push_back(std::move(token));
      rows.push_back(std::move(row));
    }
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyTable, name + ": no vectors");

  EmbeddingTable::Matrix vectors(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (long long k = 0; k < dim; ++k) vectors(i, k) = rows[i][k];
  }
  return EmbeddingTable(std::move(tokens), std::move(vectors));
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open embeddings '" + path + "'");
  return ReadEmbeddings(in, path);
}

void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dimension() << '\n';
  char buf[32];
  for (const auto& token : table.tokens()) {
    out << token;
    const Eigen::VectorXd v = table.Vector(token);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[k]);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

Eigen::VectorXd Encode(std::span<const std::string> gram,
                       const EmbeddingTable& table) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dimension());
  if (gram.empty()) return sum;
  for (const auto& token : gram) sum += table.Vector(token);
  return sum / static_cast<double>(gram.size());
}

}  // namespace nre
