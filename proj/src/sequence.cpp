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

#include "seqbo/sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqbo {

namespace {

std::string describe_char(char c) {
  if (c >= 0x21 && c <= 0x7e) return std::string("'") + c + "'";
  const unsigned char u = static_cast<unsigned char>(c);
  return "byte 0x" + std::string{"0123456789abcdef"[u >> 4],
                                 "0123456789abcdef"[u & 0xf]};
}

void check_chain(const std::string& chain, const char* name,
                 const Alphabet& alphabet) {
  if (chain.empty()) {
    throw std::invalid_argument(std::string(name) + " chain is empty");
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!alphabet.is_residue(chain[i])) {
      throw std::invalid_argument(std::string(name) + " chain position " +
                                  std::to_string(i) + ": " +
                                  describe_char(chain[i]) +
                                  " is not a residue in the alphabet");
    }
  }
}

}  // namespace

Alphabet::Alphabet(std::string residues, char separator)
    : residues_(std::move(residues)), separator_(separator) {
  if (residues_.size() != 20) {
    throw std::invalid_argument("Alphabet requires exactly 20 residues, got " +
                                std::to_string(residues_.size()));
  }
  std::fill(std::begin(index_), std::end(index_), -1);
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(residues_[i]);
    if (index_[c] != -1) {
      throw std::invalid_argument(std::string("Alphabet residue ") +
                                  describe_char(residues_[i]) + " repeats");
    }
    index_[c] = static_cast<int>(i);
  }
  unsigned char sep = static_cast<unsigned char>(separator_);
  if (index_[sep] != -1) {
    throw std::invalid_argument("Alphabet separator collides with a residue");
  }
  index_[sep] = static_cast<int>(residues_.size());
}

const Alphabet& Alphabet::canonical() {
  static const Alphabet instance("ACDEFGHIKLMNPQRSTVWY", '|');
  return instance;
}

bool Alphabet::is_residue(char c) const {
  const int idx = index_[static_cast<unsigned char>(c)];
  return idx >= 0 && idx < static_cast<int>(residues_.size());
}

std::size_t Alphabet::index_of(char c) const {
  const int idx = index_[static_cast<unsigned char>(c)];
  if (idx < 0) {
    throw std::invalid_argument("Alphabet does not contain symbol " +
                                describe_char(c));
  }
  return static_cast<std::size_t>(idx);
}

char Alphabet::symbol_at(std::size_t index) const {
  if (index < residues_.size()) return residues_[index];
  if (index == residues_.size()) return separator_;
  throw std::out_of_range("Alphabet symbol index out of range");
}

AntibodySequence AntibodySequence::parse(const std::string& heavy,
                                         const std::string& light,
                                         const Alphabet& alphabet,
                                         std::size_t expected_length) {
  check_chain(heavy, "heavy", alphabet);
  check_chain(light, "light", alphabet);
  std::string joined = heavy + alphabet.separator() + light;
  if (expected_length != 0 && joined.size() != expected_length) {
    throw std::invalid_argument(
        "joined sequence length " + std::to_string(joined.size()) +
        " does not match expected length " + std::to_string(expected_length));
  }
  return AntibodySequence(std::move(joined), heavy.size());
}

AntibodySequence AntibodySequence::apply_mutation(
    std::size_t position, char residue, const Alphabet& alphabet) const {
  if (position >= joined_.size()) {
    throw std::invalid_argument("mutation position " +
                                std::to_string(position) +
                                " is out of range");
  }
  if (position == separator_index_) {
    throw std::invalid_argument("mutation position " +
                                std::to_string(position) +
                                " is the chain separator");
  }
  if (!alphabet.is_residue(residue)) {
    throw std::invalid_argument("mutation residue " + describe_char(residue) +
                                " is not in the alphabet");
  }
  if (joined_[position] == residue) {
    throw std::invalid_argument("mutation at position " +
                                std::to_string(position) +
                                " does not change the residue");
  }
  std::string mutated = joined_;
  mutated[position] = residue;
  return AntibodySequence(std::move(mutated), separator_index_);
}

std::size_t hamming_distance(const AntibodySequence& a,
                             const AntibodySequence& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("hamming_distance requires equal lengths");
  }
  std::size_t count = 0;
  const std::string& sa = a.joined();
  const std::string& sb = b.joined();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i] != sb[i]) ++count;
  }
  return count;
}

CdrMask::CdrMask(std::vector<std::size_t> indices,
                 const AntibodySequence& reference)
    : indices_(std::move(indices)) {
  if (indices_.empty()) {
    throw std::invalid_argument("CdrMask requires at least one index");
  }
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= reference.length()) {
      throw std::invalid_argument("CdrMask index " +
                                  std::to_string(indices_[i]) +
                                  " is out of range");
    }
    if (indices_[i] == reference.separator_index()) {
      throw std::invalid_argument("CdrMask index " +
                                  std::to_string(indices_[i]) +
                                  " is the chain separator");
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw std::invalid_argument("CdrMask index " +
                                  std::to_string(indices_[i]) + " repeats");
    }
  }
}

bool CdrMask::contains(std::size_t position) const {
  return std::binary_search(indices_.begin(), indices_.end(), position);
}

}  // namespace seqbo
