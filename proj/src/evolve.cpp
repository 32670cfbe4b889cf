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

#include "seqbo/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace seqbo {

void GaConfig::validate() const {
  if (population_size < 1) {
    throw std::invalid_argument("ga population size must be positive");
  }
  if (generations < 1) {
    throw std::invalid_argument("ga generation count must be positive");
  }
  if (offspring < 1) {
    throw std::invalid_argument("ga offspring count must be positive");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw std::invalid_argument("ga crossover probability must be in [0, 1]");
  }
  if (!(elite_fraction >= 0.0 && elite_fraction <= 1.0)) {
    throw std::invalid_argument("ga elite fraction must be in [0, 1]");
  }
}

AntibodySequence ga_mutate(const AntibodySequence& seq, const CdrMask& mask,
                           const Alphabet& alphabet, RngStream& rng) {
  const std::size_t position =
      mask.indices()[rng.uniform_int(0, mask.size() - 1)];
  const std::size_t current = alphabet.index_of(seq.joined()[position]);
  // Uniform over the other 19 residues: skip the current one.
  std::size_t pick =
      rng.uniform_int(0, alphabet.residues().size() - 2);
  if (pick >= current) ++pick;
  return seq.apply_mutation(position, alphabet.symbol_at(pick), alphabet);
}

AntibodySequence ga_crossover(const AntibodySequence& a,
                              const AntibodySequence& b,
                              const Alphabet& alphabet, RngStream& rng) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("ga_crossover: parent lengths differ");
  }
  if (a.separator_index() != b.separator_index()) {
    throw std::invalid_argument("ga_crossover: parent chains are not aligned");
  }
  const std::size_t splice = rng.uniform_int(1, a.length() - 1);
  const std::string joined =
      a.joined().substr(0, splice) + b.joined().substr(splice);
  const std::size_t sep = a.separator_index();
  return AntibodySequence::parse(joined.substr(0, sep),
                                 joined.substr(sep + 1), alphabet);
}

namespace {

// Resets every non-mask position to the background sequence.
AntibodySequence repair_to_background(const AntibodySequence& child,
                                      const AntibodySequence& background,
                                      const CdrMask& mask,
                                      const Alphabet& alphabet) {
  std::string joined = background.joined();
  for (const std::size_t i : mask.indices()) {
    joined[i] = child.joined()[i];
  }
  const std::size_t sep = background.separator_index();
  return AntibodySequence::parse(joined.substr(0, sep),
                                 joined.substr(sep + 1), alphabet);
}

// Tournament of two among the elite prefix of a fitness-sorted population;
// equal fitness favours the earlier (lexicographically smaller) entry.
const AntibodySequence& tournament_pick(
    const std::vector<ScoredIndividual>& sorted_population,
    std::size_t elite_count, RngStream& rng) {
  const std::size_t i = rng.uniform_int(0, elite_count - 1);
  const std::size_t j = rng.uniform_int(0, elite_count - 1);
  return sorted_population[std::min(i, j)].sequence;
}

bool better_than(const ScoredIndividual& a, const ScoredIndividual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.sequence.joined() < b.sequence.joined();
}

}  // namespace

ScoredIndividual ga_maximize(
    const FitnessFn& fitness,
    const std::vector<AntibodySequence>& seed_population, const GaConfig& cfg,
    const CdrMask& mask, const std::unordered_set<std::string>& forbidden,
    const Alphabet& alphabet, RngStream& rng) {
  cfg.validate();
  if (seed_population.empty()) {
    throw std::invalid_argument("ga_maximize: seed population is empty");
  }
  const AntibodySequence& background = seed_population[0];
  for (const auto& seed : seed_population) {
    if (seed.length() != background.length() ||
        seed.separator_index() != background.separator_index()) {
      throw std::invalid_argument("ga_maximize: seed lengths differ");
    }
    for (std::size_t i = 0; i < seed.length(); ++i) {
      if (!mask.contains(i) && seed.joined()[i] != background.joined()[i]) {
        throw std::invalid_argument(
            "ga_maximize: seeds disagree outside the mask at position " +
            std::to_string(i));
      }
    }
  }

  std::optional<ScoredIndividual> best;
  auto consider = [&](const ScoredIndividual& ind) {
    if (forbidden.contains(ind.sequence.joined())) return;
    if (!best || better_than(ind, *best)) best = ind;
  };

  std::vector<ScoredIndividual> population;
  {
    const std::vector<double> scores = fitness(seed_population);
    if (scores.size() != seed_population.size()) {
      throw std::logic_error("fitness batch returned wrong count");
    }
    population.reserve(seed_population.size());
    for (std::size_t i = 0; i < seed_population.size(); ++i) {
      if (!std::isfinite(scores[i])) {
        throw std::invalid_argument("ga_maximize: non-finite fitness");
      }
      population.push_back({seed_population[i], scores[i]});
      consider(population.back());
    }
  }

  auto sort_and_trim = [&]() {
    std::sort(population.begin(), population.end(),
              [](const ScoredIndividual& a, const ScoredIndividual& b) {
                return better_than(a, b);
              });
    if (population.size() > static_cast<std::size_t>(cfg.population_size)) {
      population.erase(population.begin() + cfg.population_size,
                       population.end());
    }
  };
  sort_and_trim();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const std::size_t elite_count = std::min(
        population.size(),
        std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(cfg.elite_fraction *
                             static_cast<double>(population.size())))));

    std::vector<AntibodySequence> offspring;
    offspring.reserve(static_cast<std::size_t>(cfg.offspring));
    for (int k = 0; k < cfg.offspring; ++k) {
      const AntibodySequence& parent =
          tournament_pick(population, elite_count, rng);
      if (rng.uniform() < cfg.crossover_prob) {
        const AntibodySequence& other =
            tournament_pick(population, elite_count, rng);
        AntibodySequence child = ga_crossover(parent, other, alphabet, rng);
        child = repair_to_background(child, background, mask, alphabet);
        offspring.push_back(ga_mutate(child, mask, alphabet, rng));
      } else {
        offspring.push_back(ga_mutate(parent, mask, alphabet, rng));
      }
    }

    const std::vector<double> scores = fitness(offspring);
    if (scores.size() != offspring.size()) {
      throw std::logic_error("fitness batch returned wrong count");
    }
    for (std::size_t i = 0; i < offspring.size(); ++i) {
      if (!std::isfinite(scores[i])) {
        throw std::invalid_argument("ga_maximize: non-finite fitness");
      }
      population.push_back({offspring[i], scores[i]});
      consider(population.back());
    }
    sort_and_trim();
  }

  if (!best) {
    throw std::runtime_error(
        "ga_maximize: every candidate evaluated within the budget is "
        "already forbidden");
  }
  return *best;
}

}  // namespace seqbo
