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

#ifndef NRE_EMBEDDINGS_H_
#define NRE_EMBEDDINGS_H_

#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace nre {

// Static token vectors. Never modified after loading.
class EmbeddingTable {
 public:
  using Matrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, Matrix vectors);

  int dimension() const { return static_cast<int>(vectors_.cols()); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Contiguous vector of `dimension()` values, or nullptr for
  // out-of-vocabulary tokens.
  const double* Lookup(const std::string& token) const;
  Eigen::VectorXd Vector(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  Matrix vectors_;  // one row per token
  std::unordered_map<std::string, Eigen::Index> index_;
};

// Standard text word-vector format: "count dimension" header, then one
// "token v1 ... vd" line per entry. Duplicate tokens keep the first vector.
EmbeddingTable ReadEmbeddings(std::istream& in,
                              const std::string& name = "<embeddings>");
EmbeddingTable LoadEmbeddings(const std::string& path);

void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out);

// Mean of the member vectors; out-of-vocabulary tokens count as zeros.
Eigen::VectorXd Encode(std::span<const std::string> gram,
                       const EmbeddingTable& table);

}  // namespace nre

#endif  // NRE_EMBEDDINGS_H_
