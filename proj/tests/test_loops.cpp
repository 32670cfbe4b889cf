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
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqbo/loops.hpp"

namespace {

using seqbo::Alphabet;
using seqbo::AntibodySequence;
using seqbo::CdrMask;
using seqbo::EncoderAssets;
using seqbo::LoopConfig;
using seqbo::LoopMode;
using seqbo::LoopResult;
using seqbo::PoolDataset;
using seqbo::PoolEntry;
using seqbo::RunRecord;

const Alphabet& alpha() { return Alphabet::canonical(); }

// Deterministic pool of single mutants of a fixed 28-residue wild type,
// enumerated position-major then residue-major; 532 exist in total.
PoolDataset make_pool(std::size_t count,
                      const std::function<double(std::size_t)>& value) {
  const AntibodySequence wt =
      AntibodySequence::parse("ACDEFGHIKLMNPQ", "RSTVWYACDEFGHI", alpha());
  std::vector<PoolEntry> entries;
  entries.reserve(count);
  const std::string& joined = wt.joined();
  for (std::size_t pos = 0; pos < joined.size() && entries.size() < count;
       ++pos) {
    if (!alpha().is_residue(joined[pos])) {
      continue;
    }
    for (char residue : alpha().residues()) {
      if (residue == joined[pos] || entries.size() >= count) {
        continue;
      }
      entries.push_back(PoolEntry{wt.apply_mutation(pos, residue, alpha()),
                                  value(entries.size())});
    }
  }
  REQUIRE(entries.size() == count);
  return PoolDataset(std::move(entries), "synthetic");
}

LoopConfig validation_config() {
  LoopConfig cfg;
  cfg.mode = LoopMode::validation;
  cfg.trials = 1;
  cfg.iterations = 1;
  cfg.init_fraction = 0.01;
  cfg.acquisition = seqbo::AcquisitionKind::random;
  cfg.master_seed = 7;
  return cfg;
}

std::vector<const RunRecord*> trial_records(const LoopResult& result,
                                            int trial) {
  std::vector<const RunRecord*> out;
  for (const RunRecord& r : result.records) {
    if (r.trial == trial) {
      out.push_back(&r);
    }
  }
  return out;
}

std::size_t count_init(const LoopResult& result, int trial) {
  std::size_t n = 0;
  for (const RunRecord& r : result.records) {
    if (r.trial == trial && r.iteration == 0) {
      ++n;
    }
  }
  return n;
}

std::size_t count_loop(const LoopResult& result) {
  std::size_t n = 0;
  for (const RunRecord& r : result.records) {
    if (r.iteration > 0) {
      ++n;
    }
  }
  return n;
}

bool same_records(const std::vector<RunRecord>& a,
                  const std::vector<RunRecord>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].trial != b[i].trial || a[i].iteration != b[i].iteration ||
        a[i].heavy != b[i].heavy || a[i].light != b[i].light ||
        a[i].oracle_value != b[i].oracle_value ||
        a[i].best_so_far != b[i].best_so_far ||
        a[i].acquisition_value != b[i].acquisition_value) {
      return false;
    }
  }
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.is_open());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Expected minimum of k draws without replacement from a value multiset:
// E[min] = v_(1) + sum_i (v_(i) - v_(i-1)) C(n-i+1, k)/C(n, k).
double expected_min_without_replacement(std::vector<double> values,
                                        std::size_t k) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i <= n; ++i) {
    c[i][0] = 1.0;
    for (std::size_t j = 1; j <= i; ++j) {
      c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0.0);
    }
  }
  double e = values[0];
  for (std::size_t i = 1; i < n; ++i) {
    e += (values[i] - values[i - 1]) * c[n - i][k] / c[n][k];
  }
  return e;
}

seqbo::GaConfig small_ga() {
  seqbo::GaConfig ga;
  ga.population_size = 16;
  ga.generations = 4;
  ga.offspring = 8;
  return ga;
}

// Separable toy landscape: 4 masked positions pulled toward a hidden target,
// no epistasis, no noise.
struct ToyLandscape {
  AntibodySequence wt = AntibodySequence::parse("ACDEFG", "HIK", alpha());
  AntibodySequence target = wt.apply_mutation(1, 'W', alpha())
                                .apply_mutation(3, 'Y', alpha())
                                .apply_mutation(7, 'W', alpha())
                                .apply_mutation(8, 'Y', alpha());
  CdrMask mask{{1, 3, 7, 8}, wt};
  std::shared_ptr<const seqbo::SubstitutionMatrix> matrix =
      std::make_shared<seqbo::SubstitutionMatrix>(
          seqbo::SubstitutionMatrix::load_ncbi(
              std::string(SEQBO_DATA_DIR) + "/BLOSUM62.txt", alpha()));

  seqbo::OracleFn oracle() const {
    seqbo::SyntheticOracleSpec spec{wt, target, {1, 3, 7, 8}, 0.0, {},
                                    0.0, 0,      matrix};
    return seqbo::make_synthetic_oracle(spec);
  }
};

}  // namespace

TEST_CASE("mode and encoder names round-trip") {
  CHECK(seqbo::parse_loop_mode("validation") == LoopMode::validation);
  CHECK(seqbo::parse_loop_mode("full") == LoopMode::full);
  CHECK(seqbo::loop_mode_name(LoopMode::full) == std::string("full"));
  CHECK_THROWS_WITH_AS(seqbo::parse_loop_mode("quick"),
                       doctest::Contains("unknown mode 'quick'"),
                       std::invalid_argument);

  for (const char* name : {"one_hot", "ngram", "blosum", "external"}) {
    CHECK(seqbo::encoder_kind_name(seqbo::parse_encoder_kind(name)) ==
          std::string(name));
  }
  CHECK_THROWS_WITH_AS(seqbo::parse_encoder_kind("onehot"),
                       doctest::Contains("unknown encoder"),
                       std::invalid_argument);
}

TEST_CASE("config validation rejects bad values") {
  LoopConfig cfg = validation_config();
  CHECK_NOTHROW(cfg.validate());

  cfg.iterations = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("iterations"),
                       std::invalid_argument);
  cfg = validation_config();
  cfg.trials = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("trials"),
                       std::invalid_argument);
  cfg = validation_config();
  cfg.init_fraction = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("init_fraction"),
                       std::invalid_argument);
  cfg.init_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = validation_config();
  cfg.projection_dim = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("projection_dim"),
                       std::invalid_argument);
  cfg = validation_config();
  cfg.acquisition = seqbo::AcquisitionKind::noisy_ei;
  cfg.mc_samples = 8;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = validation_config();
  cfg.noise_variance = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("noise_variance"),
                       std::invalid_argument);

  // Random acquisition cannot drive the GA, so full mode refuses it.
  cfg = validation_config();
  cfg.mode = LoopMode::full;
  cfg.acquisition = seqbo::AcquisitionKind::random;
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       doctest::Contains("pool-replay baseline"),
                       std::invalid_argument);
  cfg.acquisition = seqbo::AcquisitionKind::ei;
  cfg.ga.population_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("initial training sets follow the ceiling rule") {
  const auto value = [](std::size_t i) {
    return 0.125 * static_cast<double>(i) - 30.0;
  };

  const PoolDataset pool_532 = make_pool(532, value);
  LoopConfig cfg = validation_config();
  LoopResult result = seqbo::run_validation(cfg, pool_532, {}, nullptr);
  REQUIRE(result.trial_errors.empty());
  CHECK(count_init(result, 0) == 6);  // ceil(0.01 * 532)
  CHECK(result.records.size() == 7);

  const PoolDataset pool_100 = make_pool(100, value);
  result = seqbo::run_validation(cfg, pool_100, {}, nullptr);
  REQUIRE(result.trial_errors.empty());
  CHECK(count_init(result, 0) == 1);  // ceil(0.01 * 100)
}

TEST_CASE("the validation loop stops when the pool is exhausted") {
  const PoolDataset pool =
      make_pool(20, [](std::size_t i) { return static_cast<double>(i); });
  LoopConfig cfg = validation_config();
  cfg.init_fraction = 0.05;  // 1 training point, 19 held out.
  cfg.iterations = 100;
  const LoopResult result = seqbo::run_validation(cfg, pool, {}, nullptr);
  REQUIRE(result.trial_errors.empty());
  CHECK(count_init(result, 0) == 1);
  CHECK(count_loop(result) == 19);

  // Every pool entry was revealed exactly once.
  std::set<std::string> seen;
  for (const RunRecord& r : result.records) {
    CHECK(seen.insert(r.heavy + "|" + r.light).second);
  }
  CHECK(seen.size() == 20);
}

TEST_CASE("the same master seed reproduces the split, another changes it") {
  const PoolDataset pool = make_pool(
      200, [](std::size_t i) { return 0.5 * static_cast<double>(i); });
  LoopConfig cfg = validation_config();
  cfg.init_fraction = 0.03;  // 6 training points.

  const LoopResult a = seqbo::run_validation(cfg, pool, {}, nullptr);
  const LoopResult b = seqbo::run_validation(cfg, pool, {}, nullptr);
  CHECK(same_records(a.records, b.records));

  cfg.master_seed += 1;
  const LoopResult c = seqbo::run_validation(cfg, pool, {}, nullptr);
  auto init_set = [](const LoopResult& r) {
    std::set<std::string> s;
    for (const RunRecord& rec : r.records) {
      if (rec.iteration == 0) {
        s.insert(rec.heavy);
      }
    }
    return s;
  };
  CHECK(init_set(a) != init_set(c));
}

TEST_CASE("model-based validation writes byte-identical deterministic records") {
  const PoolDataset pool = make_pool(50, [](std::size_t i) {
    // A rough landscape: no ties, values in [-3, 3].
    return 3.0 * std::sin(static_cast<double>(i) * 1.7);
  });
  LoopConfig cfg = validation_config();
  cfg.trials = 2;
  cfg.iterations = 10;
  cfg.acquisition = seqbo::AcquisitionKind::ei;
  cfg.encoder = seqbo::EncoderKind::one_hot;
  cfg.kernel = seqbo::KernelFamily::tanimoto;
  cfg.master_seed = 11;

  const std::string rec_a = "/tmp/seqbo_loops_val_a.jsonl";
  const std::string rec_b = "/tmp/seqbo_loops_val_b.jsonl";
  LoopResult first;
  {
    seqbo::RecordWriter writer(rec_a, rec_a + ".t");
    first = seqbo::run_validation(cfg, pool, {}, &writer);
  }
  REQUIRE(first.trial_errors.empty());
  CHECK(count_init(first, 0) == 1);
  CHECK(count_init(first, 1) == 1);
  CHECK(count_loop(first) == 20);
  CHECK(first.records.size() == 22);

  // Loop records carry the chosen candidate's acquisition value.
  for (const RunRecord& r : first.records) {
    if (r.iteration > 0) {
      CHECK(r.acquisition_value.has_value());
      CHECK(*r.acquisition_value >= 0.0);
    } else {
      CHECK(!r.acquisition_value.has_value());
    }
  }

  {
    seqbo::RecordWriter writer(rec_b, rec_b + ".t");
    const LoopResult second = seqbo::run_validation(cfg, pool, {}, &writer);
    CHECK(same_records(first.records, second.records));
  }
  CHECK(slurp(rec_a) == slurp(rec_b));

  // The audit passes, including training sizes of init + completed
  // iterations read back from the timing sidecar.
  const auto timings = seqbo::read_timings(rec_a + ".t");
  REQUIRE(timings.size() == 20);
  for (const auto& t : timings) {
    CHECK(t.train_size == 1 + static_cast<std::size_t>(t.iteration) - 1);
  }
  const auto report = seqbo::validate_bookkeeping(first.records, timings);
  CHECK(report.ok());
}

TEST_CASE("the random baseline matches the order-statistic expectation") {
  // Pool values 11..30; 1 init point plus 9 random picks reveal k = 10 of
  // n = 20 values, all subsets equally likely.
  std::vector<double> values;
  for (std::size_t i = 0; i < 20; ++i) {
    values.push_back(11.0 + static_cast<double>(i));
  }
  const PoolDataset pool =
      make_pool(20, [&](std::size_t i) { return values[i]; });

  LoopConfig cfg = validation_config();
  cfg.init_fraction = 0.05;
  cfg.iterations = 9;

  double sum = 0.0;
  const int runs = 200;
  for (int seed = 0; seed < runs; ++seed) {
    cfg.master_seed = static_cast<std::uint64_t>(seed);
    const LoopResult result = seqbo::run_validation(cfg, pool, {}, nullptr);
    REQUIRE(result.trial_errors.empty());
    REQUIRE(result.records.size() == 10);
    sum += result.records.back().best_so_far;
  }
  const double mean = sum / runs;
  const double expected = expected_min_without_replacement(values, 10);
  // Closed form via the hockey-stick identity: 11 + C(20,11)/C(20,10).
  CHECK(expected == doctest::Approx(11.0 + 10.0 / 11.0).epsilon(1e-12));
  CHECK(std::abs(mean - expected) <= 0.02 * expected);
}

TEST_CASE("projection, ngram, blosum, and external encoders drive the loop") {
  const PoolDataset pool = make_pool(30, [](std::size_t i) {
    return std::cos(static_cast<double>(i) * 0.9);
  });
  EncoderAssets assets;

  LoopConfig cfg = validation_config();
  cfg.iterations = 3;
  cfg.init_fraction = 0.1;  // 3 training points.
  cfg.acquisition = seqbo::AcquisitionKind::ei;

  SUBCASE("random projection") {
    cfg.projection_dim = 5;
    cfg.kernel = seqbo::KernelFamily::rbf;
    const LoopResult a = seqbo::run_validation(cfg, pool, assets, nullptr);
    REQUIRE(a.trial_errors.empty());
    CHECK(count_loop(a) == 3);
    const LoopResult b = seqbo::run_validation(cfg, pool, assets, nullptr);
    CHECK(same_records(a.records, b.records));
  }

  SUBCASE("bag of 5-grams") {
    cfg.encoder = seqbo::EncoderKind::ngram;
    const LoopResult result = seqbo::run_validation(cfg, pool, assets, nullptr);
    REQUIRE(result.trial_errors.empty());
    CHECK(seqbo::validate_bookkeeping(result.records).ok());
  }

  SUBCASE("substitution-matrix embedding") {
    cfg.encoder = seqbo::EncoderKind::blosum;
    CHECK_THROWS_WITH_AS(seqbo::run_validation(cfg, pool, assets, nullptr),
                         doctest::Contains("substitution-matrix embedding"),
                         std::invalid_argument);
    const auto matrix = seqbo::SubstitutionMatrix::load_ncbi(
        std::string(SEQBO_DATA_DIR) + "/BLOSUM62.txt", alpha());
    assets.blosum = std::make_shared<seqbo::FlipSpectrumEmbedding>(
        seqbo::FlipSpectrumEmbedding::build(matrix.matrix()));
    const LoopResult result = seqbo::run_validation(cfg, pool, assets, nullptr);
    REQUIRE(result.trial_errors.empty());
    CHECK(seqbo::validate_bookkeeping(result.records).ok());
  }

  SUBCASE("external embedding table") {
    cfg.encoder = seqbo::EncoderKind::external;
    CHECK_THROWS_WITH_AS(seqbo::run_validation(cfg, pool, assets, nullptr),
                         doctest::Contains("embedding table"),
                         std::invalid_argument);
    const std::string table_path = "/tmp/seqbo_loops_embeddings.tsv";
    {
      std::ofstream out(table_path, std::ios::trunc);
      REQUIRE(out.is_open());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        out << pool.entry(i).sequence.joined() << '\t' << 0.1 * i << '\t'
            << 0.01 * i * i << "\t1.0\n";
      }
    }
    assets.embeddings = std::make_shared<seqbo::EmbeddingTable>(
        seqbo::EmbeddingTable::load(table_path));
    cfg.kernel = seqbo::KernelFamily::matern32;
    const LoopResult result = seqbo::run_validation(cfg, pool, assets, nullptr);
    REQUIRE(result.trial_errors.empty());
    CHECK(seqbo::validate_bookkeeping(result.records).ok());
  }
}

TEST_CASE("mode mismatches and missing oracles are rejected") {
  const PoolDataset pool =
      make_pool(10, [](std::size_t i) { return static_cast<double>(i); });
  LoopConfig cfg = validation_config();
  cfg.mode = LoopMode::full;
  cfg.acquisition = seqbo::AcquisitionKind::ei;  // keep full-mode cfg valid
  CHECK_THROWS_WITH_AS(seqbo::run_validation(cfg, pool, {}, nullptr),
                       doctest::Contains("mode = validation"),
                       std::invalid_argument);

  const ToyLandscape toy;
  LoopConfig full_cfg = validation_config();
  full_cfg.ga = small_ga();
  CHECK_THROWS_WITH_AS(
      seqbo::run_full(full_cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr),
      doctest::Contains("mode = full"), std::invalid_argument);

  full_cfg.mode = LoopMode::full;
  full_cfg.acquisition = seqbo::AcquisitionKind::ei;
  CHECK_THROWS_WITH_AS(
      seqbo::run_full(full_cfg, toy.wt, toy.mask, seqbo::OracleFn{}, {},
                      nullptr),
      doctest::Contains("oracle is not set"), std::invalid_argument);
}

TEST_CASE("full-mode initialization queries 3 distinct mutants per position") {
  const AntibodySequence wt =
      AntibodySequence::parse("ACDEFGHI", "KLMP", alpha());
  const std::vector<std::size_t> mask_indices = {0, 1, 2, 3, 4, 5, 6, 7, 9,
                                                 10};
  const CdrMask mask(mask_indices, wt);

  seqbo::SyntheticOracleSpec spec{
      wt,
      wt.apply_mutation(1, 'W', alpha()).apply_mutation(9, 'Y', alpha()),
      mask_indices,
      0.0,
      {},
      0.0,
      0,
      ToyLandscape().matrix};

  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 1;
  cfg.iterations = 1;
  cfg.ga = small_ga();
  cfg.master_seed = 3;

  const LoopResult result = seqbo::run_full(
      cfg, wt, mask, seqbo::make_synthetic_oracle(spec), {}, nullptr);
  REQUIRE(result.trial_errors.empty());
  CHECK(count_init(result, 0) == 30);  // 3 per mask position.
  CHECK(result.records.size() == 31);

  std::map<std::size_t, std::set<char>> residues_by_position;
  for (const RunRecord& r : result.records) {
    if (r.iteration != 0) {
      continue;
    }
    const AntibodySequence seq =
        AntibodySequence::parse(r.heavy, r.light, alpha());
    CHECK(seqbo::hamming_distance(seq, wt) == 1);
    for (std::size_t i = 0; i < seq.joined().size(); ++i) {
      if (seq.joined()[i] != wt.joined()[i]) {
        CHECK(mask.contains(i));
        residues_by_position[i].insert(seq.joined()[i]);
      }
    }
  }
  REQUIRE(residues_by_position.size() == mask_indices.size());
  for (const auto& [pos, residues] : residues_by_position) {
    CHECK(residues.size() == 3);  // distinct alternatives at each position
    CHECK(residues.count(wt.joined()[pos]) == 0);
  }
}

TEST_CASE("full mode is deterministic and never requeries a sequence") {
  const ToyLandscape toy;
  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 1;
  cfg.iterations = 3;
  cfg.ga = small_ga();
  cfg.master_seed = 21;

  const LoopResult a =
      seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr);
  REQUIRE(a.trial_errors.empty());
  CHECK(count_init(a, 0) == 12);
  CHECK(count_loop(a) == 3);
  CHECK(seqbo::validate_bookkeeping(a.records).ok());

  const LoopResult b =
      seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr);
  CHECK(same_records(a.records, b.records));

  cfg.master_seed = 22;
  const LoopResult c =
      seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr);
  CHECK(!same_records(a.records, c.records));
}

TEST_CASE("full mode records timings against the growing training set") {
  const ToyLandscape toy;
  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 1;
  cfg.iterations = 5;
  cfg.ga = small_ga();
  cfg.master_seed = 5;

  const std::string rec = "/tmp/seqbo_loops_full.jsonl";
  LoopResult result;
  {
    seqbo::RecordWriter writer(rec, rec + ".t");
    result =
        seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, &writer);
  }
  REQUIRE(result.trial_errors.empty());
  CHECK(count_init(result, 0) == 12);
  CHECK(count_loop(result) == 5);
  CHECK(result.records.size() == 17);

  const auto timings = seqbo::read_timings(rec + ".t");
  REQUIRE(timings.size() == 5);
  for (const auto& t : timings) {
    CHECK(t.train_size == 12 + static_cast<std::size_t>(t.iteration) - 1);
    CHECK(t.wall_ms >= 0.0);
  }
  CHECK(seqbo::validate_bookkeeping(result.records, timings).ok());
  CHECK(seqbo::read_records(rec).size() == 17);
}

TEST_CASE("full mode with ngram encoding and projection grows features in step") {
  const ToyLandscape toy;
  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 1;
  cfg.iterations = 3;
  cfg.encoder = seqbo::EncoderKind::ngram;
  cfg.projection_dim = 4;
  cfg.kernel = seqbo::KernelFamily::rbf;
  cfg.ga = small_ga();
  cfg.master_seed = 9;

  const LoopResult a =
      seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr);
  REQUIRE(a.trial_errors.empty());
  CHECK(count_loop(a) == 3);
  CHECK(seqbo::validate_bookkeeping(a.records).ok());

  const LoopResult b =
      seqbo::run_full(cfg, toy.wt, toy.mask, toy.oracle(), {}, nullptr);
  CHECK(same_records(a.records, b.records));
}

TEST_CASE("a failing trial is isolated and keeps its partial records") {
  const AntibodySequence wt = AntibodySequence::parse("ACDEFG", "HIK", alpha());
  const CdrMask mask({1}, wt);

  seqbo::SyntheticOracleSpec spec{wt,  wt.apply_mutation(1, 'W', alpha()),
                                  {1}, 0.0,
                                  {},  0.0,
                                  0,   ToyLandscape().matrix};
  const seqbo::OracleFn inner = seqbo::make_synthetic_oracle(spec);

  auto calls = std::make_shared<int>(0);
  const seqbo::OracleFn flaky = [inner,
                                 calls](const AntibodySequence& seq) {
    if (++*calls == 2) {
      throw std::runtime_error("simulator offline");
    }
    return inner(seq);
  };

  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 2;
  cfg.iterations = 1;
  seqbo::GaConfig ga;
  ga.population_size = 8;
  ga.generations = 2;
  ga.offspring = 4;
  cfg.ga = ga;
  cfg.master_seed = 13;

  const LoopResult result =
      seqbo::run_full(cfg, wt, mask, flaky, {}, nullptr);
  REQUIRE(result.trial_errors.size() == 1);
  CHECK(result.trial_errors[0].find("trial 0") != std::string::npos);
  CHECK(result.trial_errors[0].find("init mutant at position 1") !=
        std::string::npos);
  CHECK(result.trial_errors[0].find("simulator offline") != std::string::npos);

  // Trial 0 kept the one record before the failure; trial 1 ran to the end.
  CHECK(trial_records(result, 0).size() == 1);
  CHECK(trial_records(result, 1).size() == 4);
}

TEST_CASE("fifty full-loop steps assemble multi-site mutants every trial") {
  const ToyLandscape toy;
  const seqbo::OracleFn oracle = toy.oracle();
  const double optimum = oracle(toy.target);
  CHECK(optimum < -2.0);  // all four positions pull downhill

  // Deepest ddg any sequence with at most two mutations can reach: both
  // tryptophan targets hit, (13 + 13) / 11.
  const double best_double = -26.0 / 11.0;

  LoopConfig cfg;
  cfg.mode = LoopMode::full;
  cfg.trials = 10;
  cfg.iterations = 50;
  cfg.acquisition = seqbo::AcquisitionKind::ei;
  cfg.encoder = seqbo::EncoderKind::one_hot;
  cfg.kernel = seqbo::KernelFamily::tanimoto;
  cfg.master_seed = 2026;
  cfg.ga.population_size = 64;
  cfg.ga.generations = 16;
  cfg.ga.offspring = 32;

  const LoopResult result =
      seqbo::run_full(cfg, toy.wt, toy.mask, oracle, {}, nullptr);
  REQUIRE(result.trial_errors.empty());
  CHECK(count_loop(result) == 500);
  CHECK(result.records.size() == 620);  // 10 x (12 init + 50 loop)
  CHECK(seqbo::validate_bookkeeping(result.records).ok());

  // The one-hot kernel treats residues at a position as exchangeable, so
  // the very last residue is a blind search; demand that every trial still
  // assembles something no <=2-mutation sequence can reach, and that the
  // exact optimum is found more than once.
  int reached = 0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    double best = std::numeric_limits<double>::infinity();
    for (const RunRecord* r : trial_records(result, trial)) {
      best = std::min(best, r->oracle_value);
    }
    CHECK(best < best_double - 1e-9);
    if (best <= optimum + 1e-12) {
      ++reached;
    }
  }
  CHECK(reached >= 2);
}
