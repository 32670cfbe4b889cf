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

#include "seqbo/substitution.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace seqbo {

SubstitutionMatrix SubstitutionMatrix::load_ncbi(const std::string& path,
                                                 const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open substitution matrix file: " + path);
  }

  std::vector<char> columns;
  std::vector<std::vector<double>> rows;
  std::vector<char> row_symbols;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (columns.empty()) {
      std::string token;
      while (fields >> token) {
        if (token.size() != 1) {
          throw std::runtime_error(path + ": column header token '" + token +
                                   "' is not a single symbol");
        }
        columns.push_back(token[0]);
      }
      continue;
    }
    std::string symbol;
    fields >> symbol;
    if (symbol.size() != 1) {
      throw std::runtime_error(path + ": row label '" + symbol +
                               "' is not a single symbol");
    }
    row_symbols.push_back(symbol[0]);
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    // Square layouts carry a full row; lower-triangular layouts carry one
    // value per row seen so far.
    if (values.size() != columns.size() && values.size() != row_symbols.size()) {
      throw std::runtime_error(path + ": row '" + symbol[0] + "' has " +
                               std::to_string(values.size()) + " values");
    }
    rows.push_back(std::move(values));
  }
  if (row_symbols.size() != columns.size()) {
    throw std::runtime_error(path + ": row count does not match column count");
  }

  const std::size_t m = columns.size();
  bool square = true;
  bool triangular = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) square = false;
    if (rows[i].size() != i + 1) triangular = false;
  }
  if (!square && !triangular) {
    throw std::runtime_error(path +
                             ": layout is neither square nor lower-triangular");
  }
  Eigen::MatrixXd full(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (row_symbols[i] != columns[i]) {
      throw std::runtime_error(path + ": row order differs from column order");
    }
    if (square) {
      for (std::size_t j = 0; j < m; ++j) full(i, j) = rows[i][j];
    } else {
      for (std::size_t j = 0; j <= i; ++j) {
        full(i, j) = rows[i][j];
        full(j, i) = rows[i][j];
      }
    }
  }

  // Restrict to the alphabet residues and append the separator row.
  std::vector<std::size_t> lookup(alphabet.residues().size());
  for (std::size_t r = 0; r < alphabet.residues().size(); ++r) {
    const char c = alphabet.residues()[r];
    std::size_t found = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (columns[j] == c) {
        found = j;
        break;
      }
    }
    if (found == m) {
      throw std::runtime_error(path + ": matrix lacks residue '" +
                               std::string(1, c) + "'");
    }
    lookup[r] = found;
  }

  const std::size_t n = alphabet.size();
  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < n - 1; ++a) {
    for (std::size_t b = 0; b < n - 1; ++b) {
      matrix(a, b) = full(lookup[a], lookup[b]);
    }
  }
  matrix(n - 1, n - 1) = 1.0;  // separator scores 1 with itself, 0 otherwise

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (matrix(a, b) != matrix(b, a)) {
        throw std::runtime_error(path + ": matrix is not symmetric at '" +
                                 std::string(1, alphabet.symbol_at(a)) +
                                 "' vs '" +
                                 std::string(1, alphabet.symbol_at(b)) + "'");
      }
    }
  }

  return SubstitutionMatrix(alphabet, std::move(matrix));
}

double SubstitutionMatrix::score(char a, char b) const {
  return matrix_(alphabet_.index_of(a), alphabet_.index_of(b));
}

double SubstitutionMatrix::max_diagonal() const {
  double best = matrix_(0, 0);
  for (Eigen::Index i = 1; i < matrix_.rows() - 1; ++i) {
    best = std::max(best, matrix_(i, i));
  }
  return best;
}

FlipSpectrumEmbedding FlipSpectrumEmbedding::build(
    const Eigen::MatrixXd& scores) {
  if (scores.rows() != scores.cols()) {
    throw std::invalid_argument("flip spectrum requires a square matrix");
  }
  const double asym = (scores - scores.transpose()).cwiseAbs().maxCoeff();
  if (asym > 0.0) {
    throw std::invalid_argument("flip spectrum requires a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scores);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("flip spectrum eigendecomposition failed");
  }
  const Eigen::VectorXd scale = eig.eigenvalues().cwiseAbs().cwiseSqrt();
  Eigen::MatrixXd rows = eig.eigenvectors() * scale.asDiagonal();
  return FlipSpectrumEmbedding(std::move(rows));
}

}  // namespace seqbo
