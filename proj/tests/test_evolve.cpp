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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "seqbo/evolve.hpp"
#include "seqbo/rng.hpp"
#include "seqbo/sequence.hpp"

using seqbo::Alphabet;
using seqbo::AntibodySequence;
using seqbo::CdrMask;
using seqbo::GaConfig;
using seqbo::RngStream;

namespace {

const Alphabet& alpha() { return Alphabet::canonical(); }

AntibodySequence wt12() {
  // Joined length 12: "ACDEFG|HIKLM".
  return AntibodySequence::parse("ACDEFG", "HIKLM", alpha());
}

// Batch fitness wrapper around a per-sequence lambda.
template <typename F>
seqbo::FitnessFn batched(F f) {
  return [f](const std::vector<AntibodySequence>& batch) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (const auto& s : batch) out.push_back(f(s));
    return out;
  };
}

}  // namespace

TEST_CASE("ga config validation") {
  GaConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  GaConfig bad = cfg;
  bad.population_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.crossover_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.elite_fraction = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ga_mutate changes exactly one mask position") {
  auto wt = wt12();
  CdrMask mask({1, 3, 8}, wt);
  RngStream rng(1, "mutate");
  for (int t = 0; t < 200; ++t) {
    auto mut = seqbo::ga_mutate(wt, mask, alpha(), rng);
    CHECK(seqbo::hamming_distance(wt, mut) == 1);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < wt.length(); ++i) {
      if (wt.joined()[i] != mut.joined()[i]) changed = i;
    }
    CHECK(mask.contains(changed));
    CHECK(alpha().is_residue(mut.joined()[changed]));
  }
}

TEST_CASE("ga_mutate on a singleton mask always hits that index") {
  auto wt = wt12();
  CdrMask mask({5}, wt);
  RngStream rng(2, "mutate-single");
  for (int t = 0; t < 50; ++t) {
    auto mut = seqbo::ga_mutate(wt, mask, alpha(), rng);
    CHECK(mut.joined()[5] != wt.joined()[5]);
    CHECK(seqbo::hamming_distance(wt, mut) == 1);
  }
}

TEST_CASE("ga_mutate position choice is uniform over the mask") {
  auto wt = wt12();
  CdrMask mask({0, 2, 7, 10}, wt);
  RngStream rng(3, "mutate-freq");
  std::array<int, 12> hits{};
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    auto mut = seqbo::ga_mutate(wt, mask, alpha(), rng);
    for (std::size_t i = 0; i < wt.length(); ++i) {
      if (wt.joined()[i] != mut.joined()[i]) ++hits[i];
    }
  }
  for (std::size_t pos : {0, 2, 7, 10}) {
    const double freq = hits[pos] / static_cast<double>(draws);
    CHECK(std::abs(freq - 0.25) < 0.02);
  }
}

TEST_CASE("ga_mutate residue choice is uniform over the alternatives") {
  auto wt = wt12();  // position 0 carries 'A'
  CdrMask mask({0}, wt);
  RngStream rng(4, "mutate-residue");
  std::array<int, 26> counts{};
  const int draws = 19000;
  for (int t = 0; t < draws; ++t) {
    auto mut = seqbo::ga_mutate(wt, mask, alpha(), rng);
    ++counts[mut.joined()[0] - 'A'];
  }
  CHECK(counts['A' - 'A'] == 0);  // never the current residue
  for (char c : alpha().residues()) {
    if (c == 'A') continue;
    // Expected 1000 per residue; binomial 4-sigma is ~125.
    CHECK(std::abs(counts[c - 'A'] - 1000) < 150);
  }
}

TEST_CASE("ga_crossover of identical parents is the parent") {
  auto wt = wt12();
  RngStream rng(5, "crossover-same");
  for (int t = 0; t < 20; ++t) {
    auto child = seqbo::ga_crossover(wt, wt, alpha(), rng);
    CHECK(child == wt);
  }
}

TEST_CASE("ga_crossover splices prefix from a and suffix from b") {
  auto a = AntibodySequence::parse("AAAA", "AAA", alpha());
  auto b = AntibodySequence::parse("CCCC", "CCC", alpha());
  RngStream rng(6, "crossover-splice");
  bool saw_aacc = false;
  for (int t = 0; t < 100; ++t) {
    auto child = seqbo::ga_crossover(a, b, alpha(), rng);
    CHECK(child.length() == a.length());
    // Some splice index c in 1..L-1 must explain the child exactly.
    bool explained = false;
    for (std::size_t c = 1; c < a.length(); ++c) {
      const std::string want =
          a.joined().substr(0, c) + b.joined().substr(c);
      if (child.joined() == want) {
        explained = true;
        break;
      }
    }
    CHECK(explained);
    if (child.heavy() == "AACC") saw_aacc = true;
  }
  // Splice at c = 2 gives heavy "AACC"; with 100 draws over 11 splice
  // points missing it has probability < 1e-4.
  CHECK(saw_aacc);
}

TEST_CASE("ga_crossover rejects misaligned parents") {
  auto a = AntibodySequence::parse("AAAA", "AAA", alpha());
  auto shorter = AntibodySequence::parse("AAA", "AAA", alpha());
  auto shifted = AntibodySequence::parse("AAA", "AAAA", alpha());
  RngStream rng(7, "crossover-bad");
  CHECK_THROWS_AS((void)seqbo::ga_crossover(a, shorter, alpha(), rng),
                  std::invalid_argument);
  // Same length but different separator position.
  CHECK_THROWS_AS((void)seqbo::ga_crossover(a, shifted, alpha(), rng),
                  std::invalid_argument);
}

TEST_CASE("ga_maximize finds the hidden target in most seeds") {
  auto wt = wt12();
  CdrMask mask({1, 8}, wt);
  auto target = wt.apply_mutation(1, 'W', alpha())
                    .apply_mutation(8, 'Y', alpha());
  auto fitness = batched([&](const AntibodySequence& s) {
    return -static_cast<double>(seqbo::hamming_distance(s, target));
  });

  GaConfig cfg;
  cfg.population_size = 128;
  cfg.generations = 30;
  cfg.offspring = 64;  // 128 + 30 x 64 = 2048 evaluations

  int found = 0;
  for (int seed = 0; seed < 10; ++seed) {
    RngStream rng(static_cast<std::uint64_t>(seed), "ga-target");
    auto best = seqbo::ga_maximize(fitness, {wt}, cfg, mask, {}, alpha(),
                                   rng);
    if (best.sequence == target) ++found;
  }
  CHECK(found >= 9);
}

TEST_CASE("every evaluated sequence respects the mask") {
  auto wt = wt12();
  CdrMask mask({2, 9}, wt);
  bool violated = false;
  auto fitness = [&](const std::vector<AntibodySequence>& batch) {
    std::vector<double> out;
    for (const auto& s : batch) {
      for (std::size_t i = 0; i < s.length(); ++i) {
        if (!mask.contains(i) && s.joined()[i] != wt.joined()[i]) {
          violated = true;
        }
      }
      out.push_back(static_cast<double>(s.joined()[2]));
    }
    return out;
  };
  GaConfig cfg;
  cfg.population_size = 32;
  cfg.generations = 10;
  cfg.offspring = 16;
  cfg.crossover_prob = 0.9;  // stress the repair path
  RngStream rng(11, "ga-mask");
  (void)seqbo::ga_maximize(fitness, {wt}, cfg, mask, {}, alpha(), rng);
  CHECK_FALSE(violated);
}

TEST_CASE("constant fitness returns a valid non-forbidden sequence") {
  auto wt = wt12();
  CdrMask mask({1}, wt);
  auto fitness = batched([](const AntibodySequence&) { return 1.0; });
  std::unordered_set<std::string> forbidden{wt.joined()};
  GaConfig cfg;
  cfg.population_size = 16;
  cfg.generations = 5;
  cfg.offspring = 8;
  RngStream rng(12, "ga-const");
  auto best =
      seqbo::ga_maximize(fitness, {wt}, cfg, mask, forbidden, alpha(), rng);
  CHECK_FALSE(forbidden.contains(best.sequence.joined()));
  CHECK(best.fitness == 1.0);
  for (std::size_t i = 0; i < wt.length(); ++i) {
    if (i == 1) continue;
    CHECK(best.sequence.joined()[i] == wt.joined()[i]);
  }
}

TEST_CASE("forbidding the optimum yields the runner-up") {
  auto wt = wt12();
  CdrMask mask({1}, wt);
  // Single mutable position: fitness strictly ranks residues, 'W' best,
  // 'Y' second.  The space of 20 variants is fully enumerable.
  auto score_of = [](char c) {
    if (c == 'W') return 100.0;
    if (c == 'Y') return 99.0;
    return static_cast<double>(c - 'A');
  };
  auto fitness = batched([&](const AntibodySequence& s) {
    return score_of(s.joined()[1]);
  });
  auto best_seq = wt.apply_mutation(1, 'W', alpha());
  auto second_seq = wt.apply_mutation(1, 'Y', alpha());

  GaConfig cfg;
  cfg.population_size = 64;
  cfg.generations = 20;
  cfg.offspring = 32;
  std::unordered_set<std::string> forbidden{best_seq.joined()};
  RngStream rng(13, "ga-forbidden");
  auto best =
      seqbo::ga_maximize(fitness, {wt}, cfg, mask, forbidden, alpha(), rng);
  CHECK(best.sequence == second_seq);
  CHECK(best.fitness == 99.0);
}

TEST_CASE("elitism never loses the best seed") {
  auto wt = wt12();
  CdrMask mask({1, 8}, wt);
  auto peak = wt.apply_mutation(1, 'W', alpha());
  // The seed peak is a sharp optimum; mutations away from it score far
  // lower, so keeping it requires elitism.
  auto fitness = batched([&](const AntibodySequence& s) {
    return s == peak ? 50.0 : -static_cast<double>(
                                  seqbo::hamming_distance(s, wt));
  });
  GaConfig cfg;
  cfg.population_size = 8;
  cfg.generations = 15;
  cfg.offspring = 8;
  RngStream rng(14, "ga-elite");
  auto best = seqbo::ga_maximize(fitness, {wt, peak}, cfg, mask, {},
                                 alpha(), rng);
  CHECK(best.sequence == peak);
  CHECK(best.fitness == 50.0);
}

TEST_CASE("ga_maximize is deterministic given the stream") {
  auto wt = wt12();
  CdrMask mask({1, 3, 8}, wt);
  auto fitness = batched([&](const AntibodySequence& s) {
    double acc = 0.0;
    for (const std::size_t i : mask.indices()) {
      acc += 0.1 * static_cast<double>(s.joined()[i]);
    }
    return std::sin(acc);
  });
  GaConfig cfg;
  cfg.population_size = 32;
  cfg.generations = 10;
  cfg.offspring = 16;
  RngStream r1(15, "ga-det");
  RngStream r2(15, "ga-det");
  auto b1 = seqbo::ga_maximize(fitness, {wt}, cfg, mask, {}, alpha(), r1);
  auto b2 = seqbo::ga_maximize(fitness, {wt}, cfg, mask, {}, alpha(), r2);
  CHECK(b1.sequence == b2.sequence);
  CHECK(b1.fitness == b2.fitness);
}

TEST_CASE("ga_maximize input validation") {
  auto wt = wt12();
  CdrMask mask({1}, wt);
  auto fitness = batched([](const AntibodySequence&) { return 0.0; });
  GaConfig cfg;
  RngStream rng(16, "ga-errors");
  CHECK_THROWS_AS((void)seqbo::ga_maximize(fitness, {}, cfg, mask, {},
                                           alpha(), rng),
                  std::invalid_argument);

  // Seeds disagreeing outside the mask are rejected.
  auto off_mask = wt.apply_mutation(3, 'W', alpha());
  CHECK_THROWS_AS((void)seqbo::ga_maximize(fitness, {wt, off_mask}, cfg,
                                           mask, {}, alpha(), rng),
                  std::invalid_argument);

  // Non-finite fitness is rejected.
  auto nan_fitness = batched([](const AntibodySequence&) {
    return std::nan("");
  });
  CHECK_THROWS_AS((void)seqbo::ga_maximize(nan_fitness, {wt}, cfg, mask, {},
                                           alpha(), rng),
                  std::invalid_argument);
}

TEST_CASE("exhausted forbidden space raises") {
  auto wt = wt12();
  CdrMask mask({1}, wt);
  auto fitness = batched([](const AntibodySequence&) { return 0.0; });
  // Forbid the whole 20-sequence space reachable through position 1.
  std::unordered_set<std::string> forbidden;
  forbidden.insert(wt.joined());
  for (char c : alpha().residues()) {
    if (c == wt.joined()[1]) continue;
    forbidden.insert(wt.apply_mutation(1, c, alpha()).joined());
  }
  GaConfig cfg;
  cfg.population_size = 16;
  cfg.generations = 3;
  cfg.offspring = 8;
  RngStream rng(17, "ga-exhausted");
  CHECK_THROWS_AS((void)seqbo::ga_maximize(fitness, {wt}, cfg, mask,
                                           forbidden, alpha(), rng),
                  std::runtime_error);
}
