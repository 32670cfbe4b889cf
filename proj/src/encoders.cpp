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

#include "seqbo/encoders.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seqbo/rng.hpp"

namespace seqbo {

EncodedSequence encode_one_hot(const AntibodySequence& seq,
                               const Alphabet& alphabet) {
  const std::string& joined = seq.joined();
  const std::size_t k = alphabet.size();
  EncodedSequence out;
  out.encoder_id = "one_hot";
  out.values.assign(joined.size() * k, 0.0);
  for (std::size_t i = 0; i < joined.size(); ++i) {
    out.values[i * k + alphabet.index_of(joined[i])] = 1.0;
  }
  return out;
}

NgramVocabulary NgramVocabulary::from_pool(
    const std::vector<AntibodySequence>& pool) {
  NgramVocabulary vocab;
  for (const auto& seq : pool) {
    const std::string& joined = seq.joined();
    if (joined.size() < kWindow) continue;
    for (std::size_t i = 0; i + kWindow <= joined.size(); ++i) {
      vocab.lookup_or_insert(joined.substr(i, kWindow));
    }
  }
  return vocab;
}

std::size_t NgramVocabulary::lookup(const std::string& gram) const {
  auto it = index_.find(gram);
  return it == index_.end() ? grams_.size() : it->second;
}

std::size_t NgramVocabulary::lookup_or_insert(const std::string& gram) {
  auto [it, inserted] = index_.try_emplace(gram, grams_.size());
  if (inserted) grams_.push_back(gram);
  return it->second;
}

EncodedSequence encode_bag_of_ngrams(const AntibodySequence& seq,
                                     NgramVocabulary& vocab, bool extend) {
  const std::string& joined = seq.joined();
  if (joined.size() < NgramVocabulary::kWindow) {
    throw std::invalid_argument(
        "bag-of-ngrams requires sequence length >= " +
        std::to_string(NgramVocabulary::kWindow));
  }
  if (extend) {
    for (std::size_t i = 0; i + NgramVocabulary::kWindow <= joined.size();
         ++i) {
      vocab.lookup_or_insert(joined.substr(i, NgramVocabulary::kWindow));
    }
  }
  EncodedSequence out;
  out.encoder_id = "ngram";
  out.values.assign(vocab.size(), 0.0);
  for (std::size_t i = 0; i + NgramVocabulary::kWindow <= joined.size(); ++i) {
    const std::size_t idx =
        vocab.lookup(joined.substr(i, NgramVocabulary::kWindow));
    if (idx < vocab.size()) out.values[idx] += 1.0;
  }
  return out;
}

EncodedSequence encode_blosum(const AntibodySequence& seq,
                              const FlipSpectrumEmbedding& emb) {
  const std::string& joined = seq.joined();
  const Alphabet& alphabet = Alphabet::canonical();
  const std::size_t k = emb.dim();
  EncodedSequence out;
  out.encoder_id = "blosum";
  out.values.resize(joined.size() * k);
  for (std::size_t i = 0; i < joined.size(); ++i) {
    const std::size_t sym = alphabet.index_of(joined[i]);
    if (sym >= emb.symbol_count()) {
      throw std::invalid_argument(
          "flip-spectrum embedding lacks symbol index " + std::to_string(sym));
    }
    const Eigen::VectorXd row = emb.row(sym);
    for (std::size_t j = 0; j < k; ++j) {
      out.values[i * k + j] = row[static_cast<Eigen::Index>(j)];
    }
  }
  return out;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open embedding file: " + path);
  }
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string joined;
    if (!std::getline(fields, joined, '\t') || joined.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": missing sequence key");
    }
    std::vector<double> values;
    std::string token;
    while (std::getline(fields, token, '\t')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad value '" + token + "'");
      }
    }
    if (values.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": row has no vector entries");
    }
    if (table.dim_ == 0) {
      table.dim_ = values.size();
    } else if (values.size() != table.dim_) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": dimension " + std::to_string(values.size()) +
                               " differs from " + std::to_string(table.dim_));
    }
    auto it = table.table_.find(joined);
    if (it != table.table_.end()) {
      if (it->second != values) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": duplicate sequence with differing vector");
      }
      continue;
    }
    table.table_.emplace(std::move(joined), std::move(values));
  }
  return table;
}

EncodedSequence EmbeddingTable::lookup(const std::string& joined) const {
  auto it = table_.find(joined);
  if (it == table_.end()) {
    throw std::out_of_range("no embedding for sequence '" + joined + "'");
  }
  return EncodedSequence{it->second, "external"};
}

RandomProjection::RandomProjection(std::size_t input_dim,
                                   std::size_t output_dim, std::uint64_t seed)
    : output_dim_(output_dim), seed_(seed) {
  if (output_dim == 0) {
    throw std::invalid_argument("RandomProjection output dimension is zero");
  }
  resize_input(input_dim);
}

void RandomProjection::resize_input(std::size_t new_input_dim) {
  if (new_input_dim < rows_.size()) {
    throw std::invalid_argument("RandomProjection input dimension cannot shrink");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(output_dim_));
  for (std::size_t i = rows_.size(); i < new_input_dim; ++i) {
    // Row i is a pure function of (seed, i), so earlier rows are unaffected
    // by later growth.
    RngStream row_rng(seed_, "proj-row:" + std::to_string(i));
    std::vector<double> row(output_dim_);
    for (double& v : row) v = scale * row_rng.normal();
    rows_.push_back(std::move(row));
  }
}

EncodedSequence RandomProjection::apply(const EncodedSequence& x) const {
  if (x.values.size() != rows_.size()) {
    throw std::invalid_argument(
        "RandomProjection input dimension mismatch: got " +
        std::to_string(x.values.size()) + ", expected " +
        std::to_string(rows_.size()));
  }
  EncodedSequence out;
  out.encoder_id = x.encoder_id + "+proj" + std::to_string(output_dim_);
  out.values.assign(output_dim_, 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double xi = x.values[i];
    if (xi == 0.0) continue;
    const std::vector<double>& row = rows_[i];
    for (std::size_t j = 0; j < output_dim_; ++j) {
      out.values[j] += xi * row[j];
    }
  }
  return out;
}

}  // namespace seqbo
