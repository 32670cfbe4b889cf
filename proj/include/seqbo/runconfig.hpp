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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqbo/loops.hpp"
#include "seqbo/oracles.hpp"
#include "seqbo/sequence.hpp"

namespace seqbo {

struct SyntheticOracleConfig {
  std::string target_heavy;
  std::string target_light;
  double lambda = 0.25;
  std::vector<std::pair<std::size_t, std::size_t>> coupled_pairs;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct ExternalOracleConfig {
  std::string command;
  double timeout_seconds = 60.0;
  int retries = 0;
};

// Everything a run needs, straight from the config file: loop settings plus
// data-source paths and the oracle description.  Pure data; the *_from
// builders below load the heavyweight objects.
struct RunConfig {
  LoopConfig loop;
  std::string pool_path;        // validation mode
  std::string embeddings_path;  // encoder "external"
  std::string blosum_path;      // encoder "blosum" and the synthetic oracle
  std::string wild_type_heavy;  // full mode
  std::string wild_type_light;
  std::vector<std::size_t> cdr_mask;
  std::optional<SyntheticOracleConfig> synthetic_oracle;
  std::optional<ExternalOracleConfig> external_oracle;
};

// Reads a JSON config, applies key=value overrides (dotted paths address
// nested keys, values parse as JSON scalars with a plain-string fallback),
// then validates.  Unknown keys anywhere are rejected, not ignored.
// Iteration/trial counts default per mode: 200/10 validation, 50/3 full.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {});

// Loads the encoder side inputs the config calls for.
EncoderAssets build_assets(const RunConfig& cfg);

AntibodySequence wild_type_from(const RunConfig& cfg);
CdrMask mask_from(const RunConfig& cfg, const AntibodySequence& wild_type);

// Builds the configured oracle; synthetic oracles load the substitution
// matrix from blosum_path.
OracleFn oracle_from(const RunConfig& cfg, const AntibodySequence& wild_type);

}  // namespace seqbo
