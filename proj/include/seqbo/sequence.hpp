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

#include <cstddef>
#include <string>
#include <vector>

namespace seqbo {

// Residue alphabet: twenty distinct amino-acid symbols plus a separator
// symbol that never appears inside a chain.
class Alphabet {
 public:
  Alphabet(std::string residues, char separator);

  // Twenty canonical residues in alphabetical order with '|' separator.
  static const Alphabet& canonical();

  const std::string& residues() const { return residues_; }
  char separator() const { return separator_; }

  // Number of symbols including the separator.
  std::size_t size() const { return residues_.size() + 1; }

  bool is_residue(char c) const;
  // Index of a symbol in [0, size()); residues first, separator last.
  std::size_t index_of(char c) const;
  char symbol_at(std::size_t index) const;

 private:
  std::string residues_;
  char separator_;
  int index_[256];
};

// Paired antibody chains stored as one joined string
// "heavy + separator + light".  Immutable after construction.
class AntibodySequence {
 public:
  // Validates both chains against the alphabet.  If expected_length is
  // nonzero the joined length must match it exactly.
  static AntibodySequence parse(const std::string& heavy,
                                const std::string& light,
                                const Alphabet& alphabet,
                                std::size_t expected_length = 0);

  const std::string& joined() const { return joined_; }
  std::size_t length() const { return joined_.size(); }
  std::size_t separator_index() const { return separator_index_; }

  std::string heavy() const { return joined_.substr(0, separator_index_); }
  std::string light() const { return joined_.substr(separator_index_ + 1); }

  // Returns a copy with position replaced by residue.  The position must
  // not be the separator and the residue must differ from the current one.
  AntibodySequence apply_mutation(std::size_t position, char residue,
                                  const Alphabet& alphabet) const;

  bool operator==(const AntibodySequence& other) const {
    return joined_ == other.joined_;
  }

 private:
  AntibodySequence(std::string joined, std::size_t separator_index)
      : joined_(std::move(joined)), separator_index_(separator_index) {}

  std::string joined_;
  std::size_t separator_index_;
};

// Number of positions at which the joined strings differ; lengths must match.
std::size_t hamming_distance(const AntibodySequence& a,
                             const AntibodySequence& b);

// Indices of mutable positions within a joined sequence.
class CdrMask {
 public:
  // Indices must be in-range, unique, and exclude the separator.
  CdrMask(std::vector<std::size_t> indices, const AntibodySequence& reference);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t position) const;

 private:
  std::vector<std::size_t> indices_;
};

}  // namespace seqbo
