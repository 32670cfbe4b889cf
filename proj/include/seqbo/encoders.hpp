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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqbo/sequence.hpp"
#include "seqbo/substitution.hpp"

namespace seqbo {

struct EncodedSequence {
  std::vector<double> values;
  std::string encoder_id;

  std::size_t dimension() const { return values.size(); }
};

// One-hot over the 21-symbol alphabet: block i holds a single 1 at the
// index of symbol i.  Dimension = length x 21.
EncodedSequence encode_one_hot(const AntibodySequence& seq,
                               const Alphabet& alphabet);

// Insertion-ordered vocabulary of n-grams (n = 5).  Indices are assigned in
// first-seen order and never change within a run.
class NgramVocabulary {
 public:
  static constexpr std::size_t kWindow = 5;

  NgramVocabulary() = default;

  // Scans every sequence of the pool in order, adding unseen windows.
  static NgramVocabulary from_pool(const std::vector<AntibodySequence>& pool);

  std::size_t size() const { return grams_.size(); }
  const std::vector<std::string>& grams() const { return grams_; }

  // Index of a gram, or size() if absent.
  std::size_t lookup(const std::string& gram) const;

  // Index of a gram, inserting it at the end if absent.
  std::size_t lookup_or_insert(const std::string& gram);

 private:
  std::vector<std::string> grams_;
  std::map<std::string, std::size_t> index_;
};

// Counts vocabulary windows in the joined sequence.  With extend set, unseen
// windows are appended to the vocabulary before counting; otherwise they
// contribute nothing.  The output dimension is the (possibly grown)
// vocabulary size.
EncodedSequence encode_bag_of_ngrams(const AntibodySequence& seq,
                                     NgramVocabulary& vocab, bool extend);

// Concatenates the flip-spectrum rows of each symbol in sequence order.
// Dimension = length x 21.
EncodedSequence encode_blosum(const AntibodySequence& seq,
                              const FlipSpectrumEmbedding& emb);

// Precomputed external embeddings keyed by joined sequence.  File format:
// one row per sequence, tab-separated, joined sequence first then the
// vector entries.
class EmbeddingTable {
 public:
  static EmbeddingTable load(const std::string& path);

  std::size_t size() const { return table_.size(); }
  std::size_t dim() const { return dim_; }

  // Embedding for a joined sequence; absent sequences are an error naming
  // the sequence.
  EncodedSequence lookup(const std::string& joined) const;

 private:
  std::map<std::string, std::vector<double>> table_;
  std::size_t dim_ = 0;
};

// Gaussian random projection to a lower dimension.  Entries are standard
// normal scaled by 1/sqrt(output_dim).  Each input row draws from its own
// labeled stream, so growing the input dimension appends rows without
// disturbing existing ones.
class RandomProjection {
 public:
  RandomProjection(std::size_t input_dim, std::size_t output_dim,
                   std::uint64_t seed);

  std::size_t input_dim() const { return rows_.size(); }
  std::size_t output_dim() const { return output_dim_; }
  std::uint64_t seed() const { return seed_; }

  // Grows the input dimension; shrinking is an error.
  void resize_input(std::size_t new_input_dim);

  // Returns x^T M with dimension output_dim; x must match input_dim.
  EncodedSequence apply(const EncodedSequence& x) const;

 private:
  std::size_t output_dim_;
  std::uint64_t seed_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace seqbo
