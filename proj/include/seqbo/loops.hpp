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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqbo/acquisition.hpp"
#include "seqbo/encoders.hpp"
#include "seqbo/evolve.hpp"
#include "seqbo/gp.hpp"
#include "seqbo/kernels.hpp"
#include "seqbo/oracles.hpp"
#include "seqbo/records.hpp"
#include "seqbo/sequence.hpp"

namespace seqbo {

struct Observation {
  AntibodySequence sequence;
  double value = 0.0;  // kcal/mol
};

enum class LoopMode { validation, full };

const char* loop_mode_name(LoopMode mode);
LoopMode parse_loop_mode(const std::string& name);

enum class EncoderKind { one_hot, ngram, blosum, external };

const char* encoder_kind_name(EncoderKind kind);
EncoderKind parse_encoder_kind(const std::string& name);

// One experiment: repeated trials of initialize / refit / acquire / query.
// Field names match the run-config file keys one to one.
struct LoopConfig {
  LoopMode mode = LoopMode::validation;
  int iterations = 200;  // 50 is the usual full-mode setting
  int trials = 10;       // 3 in full mode
  // Validation only: the initial training set is a uniform sample of
  // ceil(init_fraction x pool size) pool entries.  Full mode instead queries
  // 3 distinct random single mutants at every mask position.
  double init_fraction = 0.01;
  EncoderKind encoder = EncoderKind::one_hot;
  KernelFamily kernel = KernelFamily::tanimoto;
  std::optional<std::size_t> projection_dim;
  AcquisitionKind acquisition = AcquisitionKind::ei;
  int mc_samples = 128;
  NoiseMode noise_mode = NoiseMode::fixed;
  double noise_variance = 1e-4;
  std::uint64_t master_seed = 0;
  GaConfig ga;  // full mode only

  // Throws std::invalid_argument on bad values.  Random acquisition is a
  // pool-replay baseline only: in full mode a GA maximizing noise would
  // query arbitrary sequences, so the combination is rejected.
  void validate() const;
};

// Side inputs some encoders need.
struct EncoderAssets {
  std::shared_ptr<const FlipSpectrumEmbedding> blosum;  // encoder "blosum"
  std::shared_ptr<const EmbeddingTable> embeddings;     // encoder "external"
};

struct LoopResult {
  // Every record produced, in write order; aborted trials keep their
  // partial prefix.
  std::vector<RunRecord> records;
  // One message per aborted trial; empty when every trial succeeded.
  std::vector<std::string> trial_errors;
};

// Pool-replay validation: per trial, sample an initial training set, then
// repeatedly refit the surrogate, score every held-out pool entry, reveal
// the argmax's pooled value, and move it into the training set.  Trials run
// sequentially with disjoint derived seeds; a failing trial is recorded in
// trial_errors and does not stop the others.  writer may be null.
LoopResult run_validation(const LoopConfig& cfg, const PoolDataset& pool,
                          const EncoderAssets& assets, RecordWriter* writer);

// Simulator-in-the-loop: per trial, query 3 random distinct single mutants
// at each mask position, then repeatedly refit, run the GA over
// mask-restricted mutants (already-queried sequences forbidden), and send
// the winner to the oracle.  The mask must index into the wild type.
LoopResult run_full(const LoopConfig& cfg, const AntibodySequence& wild_type,
                    const CdrMask& mask, const OracleFn& oracle,
                    const EncoderAssets& assets, RecordWriter* writer);

}  // namespace seqbo
