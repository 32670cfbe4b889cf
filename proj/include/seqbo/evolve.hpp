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

#include <functional>
#include <unordered_set>
#include <vector>

#include "seqbo/rng.hpp"
#include "seqbo/sequence.hpp"

namespace seqbo {

struct GaConfig {
  int population_size = 128;
  int generations = 50;
  int offspring = 64;
  double crossover_prob = 0.5;
  double elite_fraction = 0.25;

  void validate() const;
};

struct ScoredIndividual {
  AntibodySequence sequence;
  double fitness;
};

// Batched fitness: one call scores a whole generation so the surrogate can
// amortize posterior algebra.  Must be pure.
using FitnessFn =
    std::function<std::vector<double>(const std::vector<AntibodySequence>&)>;

// Changes exactly one uniformly chosen mask position to a uniformly chosen
// different residue.
AntibodySequence ga_mutate(const AntibodySequence& seq, const CdrMask& mask,
                           const Alphabet& alphabet, RngStream& rng);

// Single-point splice: child = a[0..c) + b[c..L) with c uniform on 1..L-1.
// Parents must have equal length and aligned separators.
AntibodySequence ga_crossover(const AntibodySequence& a,
                              const AntibodySequence& b,
                              const Alphabet& alphabet, RngStream& rng);

// Elitist GA maximizing fitness over mask-restricted mutants of the seed
// population's shared background.  Every evaluated sequence matches the
// seeds at all non-mask positions.  Returns the best-fitness sequence whose
// joined string is not in forbidden; throws if every evaluated candidate is
// forbidden after the full generation budget.
ScoredIndividual ga_maximize(const FitnessFn& fitness,
                             const std::vector<AntibodySequence>& seed_population,
                             const GaConfig& cfg, const CdrMask& mask,
                             const std::unordered_set<std::string>& forbidden,
                             const Alphabet& alphabet, RngStream& rng);

}  // namespace seqbo
