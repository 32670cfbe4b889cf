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
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "seqbo/sequence.hpp"
#include "seqbo/substitution.hpp"

namespace seqbo {

// A black-box source of ΔΔG values, kcal/mol; lower is better.
using OracleFn = std::function<double(const AntibodySequence&)>;

struct PoolEntry {
  AntibodySequence sequence;
  double ddg;  // kcal/mol
};

// Pre-simulated (sequence, ΔΔG) pairs: unique sequences, equal lengths,
// finite values.
class PoolDataset {
 public:
  PoolDataset(std::vector<PoolEntry> entries, std::string label);

  // Parses the pool CSV: header `heavy_chain,light_chain,ddg`, one mutant
  // per row.  Errors carry 1-based line numbers.
  static PoolDataset load_csv(const std::string& path,
                              const Alphabet& alphabet);

  void write_csv(const std::string& path) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<PoolEntry>& entries() const { return entries_; }
  const PoolEntry& entry(std::size_t i) const { return entries_.at(i); }
  const std::string& label() const { return label_; }

 private:
  std::vector<PoolEntry> entries_;
  std::string label_;
};

// Deterministic test oracle: per-position pull toward a hidden target scored
// by the substitution matrix, plus pairwise epistatic bonuses on coupled
// positions, plus optional seeded observation noise.
struct SyntheticOracleSpec {
  AntibodySequence wild_type;
  AntibodySequence hidden_target;
  std::vector<std::size_t> mask_indices;
  double lambda = 0.25;
  std::vector<std::pair<std::size_t, std::size_t>> coupled_pairs;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::shared_ptr<const SubstitutionMatrix> matrix;

  // Checks: matrix present; target matches WT outside the mask; coupled
  // pairs lie within the mask and are non-degenerate; noise non-negative.
  void validate() const;
};

// ΔΔG(s) = -Σ_{i∈mask} [B(s_i, t_i) - B(WT_i, t_i)] / s_B
//          - λ·Σ_{(i,j) coupled} 1[s_i = t_i ∧ s_j = t_j] + noise,
// where s_B is the largest diagonal entry of the substitution matrix.  The
// noise term is a pure function of (seed, joined sequence).
double synthetic_ddg(const AntibodySequence& seq,
                     const SyntheticOracleSpec& spec);

OracleFn make_synthetic_oracle(SyntheticOracleSpec spec);

// External simulator launched per query: the joined sequence is written to
// stdin as "heavy<TAB>light\n" and a single decimal ΔΔG is read back.
struct SimulatorClientSpec {
  std::string command;
  double timeout_seconds = 60.0;
  int retries = 0;

  void validate() const;
};

double query_external(const AntibodySequence& seq,
                      const SimulatorClientSpec& spec);

OracleFn make_external_oracle(SimulatorClientSpec spec);

}  // namespace seqbo
