/*
 * Copyright 2026 The seqbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>
#include <string>

#include "seqbo/sequence.hpp"

namespace seqbo {

// Symmetric residue substitution scores over a 21-symbol alphabet.  The
// separator row is synthetic: self-score 1, zero against every residue.
class SubstitutionMatrix {
 public:
  // Parses an NCBI-format scoring file (square or lower-triangular, '#'
  // comments) and restricts it to the residues of the alphabet.
  static SubstitutionMatrix load_ncbi(const std::string& path,
                                      const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }

  // Score between two alphabet symbols (separator included).
  double score(char a, char b) const;

  // Full 21x21 score matrix ordered like the alphabet.
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Largest residue self-score.
  double max_diagonal() const;

 private:
  SubstitutionMatrix(Alphabet alphabet, Eigen::MatrixXd matrix)
      : alphabet_(std::move(alphabet)), matrix_(std::move(matrix)) {}

  Alphabet alphabet_;
  Eigen::MatrixXd matrix_;
};

// Per-symbol embedding rows derived from the eigendecomposition of a
// symmetric score matrix S = U diag(d) U^T: row i of the embedding is
// U_i * |d|^{1/2}, so inner products reproduce U |d| U^T (flip spectrum).
class FlipSpectrumEmbedding {
 public:
  static FlipSpectrumEmbedding build(const Eigen::MatrixXd& scores);

  std::size_t symbol_count() const { return rows_.rows(); }
  std::size_t dim() const { return rows_.cols(); }

  // Embedding row for symbol index i.
  Eigen::VectorXd row(std::size_t i) const { return rows_.row(i); }

  // Gram matrix of the embedding rows, equal to U |d| U^T.
  Eigen::MatrixXd gram() const { return rows_ * rows_.transpose(); }

 private:
  explicit FlipSpectrumEmbedding(Eigen::MatrixXd rows)
      : rows_(std::move(rows)) {}

  Eigen::MatrixXd rows_;
};

}  // namespace seqbo
