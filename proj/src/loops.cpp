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

#include "seqbo/loops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace seqbo {

const char* loop_mode_name(LoopMode mode) {
  switch (mode) {
    case LoopMode::validation:
      return "validation";
    case LoopMode::full:
      return "full";
  }
  throw std::logic_error("unreachable loop mode");
}

LoopMode parse_loop_mode(const std::string& name) {
  if (name == "validation") {
    return LoopMode::validation;
  }
  if (name == "full") {
    return LoopMode::full;
  }
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected validation or full)");
}

const char* encoder_kind_name(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::one_hot:
      return "one_hot";
    case EncoderKind::ngram:
      return "ngram";
    case EncoderKind::blosum:
      return "blosum";
    case EncoderKind::external:
      return "external";
  }
  throw std::logic_error("unreachable encoder kind");
}

EncoderKind parse_encoder_kind(const std::string& name) {
  if (name == "one_hot") {
    return EncoderKind::one_hot;
  }
  if (name == "ngram") {
    return EncoderKind::ngram;
  }
  if (name == "blosum") {
    return EncoderKind::blosum;
  }
  if (name == "external") {
    return EncoderKind::external;
  }
  throw std::invalid_argument(
      "unknown encoder '" + name +
      "' (expected one_hot, ngram, blosum, or external)");
}

void LoopConfig::validate() const {
  if (iterations < 1) {
    throw std::invalid_argument("iterations must be >= 1");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (mode == LoopMode::validation &&
      !(init_fraction > 0.0 && init_fraction <= 1.0)) {
    throw std::invalid_argument("init_fraction must lie in (0, 1]");
  }
  if (projection_dim && *projection_dim == 0) {
    throw std::invalid_argument("projection_dim must be >= 1");
  }
  AcquisitionSpec{acquisition, mc_samples}.validate();
  if (noise_mode == NoiseMode::fixed && !(noise_variance > 0.0)) {
    throw std::invalid_argument("noise_variance must be positive");
  }
  if (mode == LoopMode::full) {
    if (acquisition == AcquisitionKind::random) {
      throw std::invalid_argument(
          "random acquisition is a pool-replay baseline; full mode needs ei "
          "or noisy_ei");
    }
    ga.validate();
  }
}

namespace {

Eigen::VectorXd to_vector(const EncodedSequence& e) {
  return Eigen::Map<const Eigen::VectorXd>(
      e.values.data(), static_cast<Eigen::Index>(e.values.size()));
}

KernelSpec initial_spec(KernelFamily family) {
  switch (family) {
    case KernelFamily::tanimoto:
      return KernelSpec::tanimoto();
    case KernelFamily::rbf:
      return KernelSpec::rbf(1.0);
    case KernelFamily::matern32:
      return KernelSpec::matern32(1.0);
  }
  throw std::logic_error("unreachable kernel family");
}

GpConfig gp_config(const LoopConfig& cfg) {
  GpConfig gp;
  gp.noise_variance = cfg.noise_variance;
  gp.noise_mode = cfg.noise_mode;
  return gp;
}

void check_assets(const LoopConfig& cfg, const EncoderAssets& assets) {
  if (cfg.encoder == EncoderKind::blosum && !assets.blosum) {
    throw std::invalid_argument(
        "encoder 'blosum' needs a substitution-matrix embedding");
  }
  if (cfg.encoder == EncoderKind::external && !assets.embeddings) {
    throw std::invalid_argument(
        "encoder 'external' needs a precomputed embedding table");
  }
}

void emit(LoopResult& result, RecordWriter* writer, const RunRecord& record) {
  result.records.push_back(record);
  if (writer != nullptr) {
    writer->write(record);
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// Validation mode.

struct ValidationContext {
  const LoopConfig& cfg;
  const PoolDataset& pool;
  // Raw (unprojected) encodings, one per pool entry, fixed for the run.
  std::vector<Eigen::VectorXd> base;
};

void run_validation_trial(const ValidationContext& ctx, int trial,
                          LoopResult& result, RecordWriter* writer) {
  const LoopConfig& cfg = ctx.cfg;
  const std::size_t n = ctx.pool.size();
  const RngStream trial_rng(cfg.master_seed,
                            "trial:" + std::to_string(trial));

  // Per-trial feature map: one projection sampled per trial, or the shared
  // raw encodings.
  std::vector<Eigen::VectorXd> projected;
  if (cfg.projection_dim) {
    const std::size_t raw_dim = static_cast<std::size_t>(ctx.base[0].size());
    RandomProjection proj(raw_dim, *cfg.projection_dim,
                          trial_rng.derive("proj").stream_seed());
    projected.reserve(n);
    for (const Eigen::VectorXd& x : ctx.base) {
      EncodedSequence raw{std::vector<double>(x.data(), x.data() + x.size()),
                          "raw"};
      projected.push_back(to_vector(proj.apply(raw)));
    }
  }
  const std::vector<Eigen::VectorXd>& feats =
      cfg.projection_dim ? projected : ctx.base;

  std::vector<double> pool_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    pool_sq[i] = feats[i].squaredNorm();
  }

  // Initial training set: uniform sample without replacement of size
  // ceil(init_fraction x n), via a partial Fisher-Yates pass.
  const std::size_t init_count = static_cast<std::size_t>(
      std::ceil(cfg.init_fraction * static_cast<double>(n)));
  if (init_count == 0 || init_count > n) {
    throw std::runtime_error("init_fraction " +
                             std::to_string(cfg.init_fraction) +
                             " yields an unusable initial set");
  }
  RngStream init_rng = trial_rng.derive("init");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  for (std::size_t i = 0; i < init_count; ++i) {
    const std::size_t j = i + init_rng.uniform_int(0, n - 1 - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> heldout(order.begin() + init_count, order.end());
  std::sort(heldout.begin(), heldout.end());

  const bool model_based = cfg.acquisition != AcquisitionKind::random;
  std::vector<std::size_t> train;
  std::vector<double> targets;
  // Dot products of each training encoding against the whole pool, filled
  // as points join the training set; kernel vectors are assembled from
  // these instead of re-touching the encodings.
  std::vector<std::vector<double>> dot_rows;
  double best = std::numeric_limits<double>::infinity();

  auto add_to_train = [&](std::size_t pool_idx) {
    train.push_back(pool_idx);
    targets.push_back(ctx.pool.entry(pool_idx).ddg);
    if (model_based) {
      std::vector<double> row(n);
      for (std::size_t i = 0; i < n; ++i) {
        row[i] = feats[pool_idx].dot(feats[i]);
      }
      dot_rows.push_back(std::move(row));
    }
  };

  for (std::size_t i = 0; i < init_count; ++i) {
    const std::size_t idx = order[i];
    const PoolEntry& entry = ctx.pool.entry(idx);
    add_to_train(idx);
    best = std::min(best, entry.ddg);
    emit(result, writer,
         RunRecord{trial, 0, entry.sequence.heavy(), entry.sequence.light(),
                   entry.ddg, best, std::nullopt});
  }

  const KernelSpec start_spec = initial_spec(cfg.kernel);
  const GpConfig gp_cfg = gp_config(cfg);

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    if (heldout.empty()) {
      break;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t train_size = train.size();

    std::vector<double> scores;
    if (!model_based) {
      RngStream acq_rng = trial_rng.derive("acq:" + std::to_string(iter));
      scores = random_scores(heldout.size(), acq_rng);
    } else {
      RngStream fit_rng = trial_rng.derive("fit:" + std::to_string(iter));
      std::vector<Eigen::VectorXd> inputs;
      inputs.reserve(train_size);
      for (std::size_t idx : train) {
        inputs.push_back(feats[idx]);
      }
      const FittedGp gp =
          FittedGp::fit(std::move(inputs),
                        Eigen::Map<const Eigen::VectorXd>(
                            targets.data(),
                            static_cast<Eigen::Index>(targets.size())),
                        start_spec, gp_cfg, fit_rng);
      const KernelSpec& spec = gp.kernel();
      const double kself = kernel_self(spec);
      auto kvec_for = [&](std::size_t pool_idx) {
        Eigen::VectorXd kvec(static_cast<Eigen::Index>(train_size));
        for (std::size_t j = 0; j < train_size; ++j) {
          kvec[static_cast<Eigen::Index>(j)] = kernel_from_products(
              spec, dot_rows[j][pool_idx], pool_sq[pool_idx],
              pool_sq[train[j]]);
        }
        return kvec;
      };

      scores.resize(heldout.size());
      if (cfg.acquisition == AcquisitionKind::ei) {
        for (std::size_t c = 0; c < heldout.size(); ++c) {
          const Prediction p = gp.predict_from_kvec(kvec_for(heldout[c]),
                                                    kself);
          scores[c] = expected_improvement(p.mean, p.variance, best);
        }
      } else {
        RngStream acq_rng = trial_rng.derive("acq:" + std::to_string(iter));
        const NoisyEiScorer scorer(gp, cfg.mc_samples, acq_rng);
        for (std::size_t c = 0; c < heldout.size(); ++c) {
          scores[c] = scorer.score_from_kvec(kvec_for(heldout[c]), kself);
        }
      }
    }

    const std::size_t pick = argmax_score(scores);
    const std::size_t pool_idx = heldout[pick];
    const PoolEntry& entry = ctx.pool.entry(pool_idx);
    heldout.erase(heldout.begin() + static_cast<std::ptrdiff_t>(pick));
    add_to_train(pool_idx);
    best = std::min(best, entry.ddg);

    emit(result, writer,
         RunRecord{trial, iter, entry.sequence.heavy(), entry.sequence.light(),
                   entry.ddg, best,
                   model_based ? std::optional<double>(scores[pick])
                               : std::nullopt});
    if (writer != nullptr) {
      writer->write_timing(trial, iter, train_size, elapsed_ms(t0));
    }
  }
}

// ---------------------------------------------------------------------------
// Full mode.

// Per-trial encoder state: the n-gram vocabulary grows with every accepted
// query, and the projection (when configured) grows its input side in step,
// which leaves previously projected encodings unchanged.
class FullEncoder {
 public:
  FullEncoder(const LoopConfig& cfg, const EncoderAssets& assets,
              const Alphabet& alphabet, std::uint64_t projection_seed)
      : cfg_(cfg),
        assets_(assets),
        alphabet_(alphabet),
        projection_seed_(projection_seed) {}

  // Extends the vocabulary with the sequence's windows (accepted queries
  // only, so candidate scoring never perturbs the feature map).
  void absorb(const AntibodySequence& seq) {
    if (cfg_.encoder == EncoderKind::ngram) {
      encode_bag_of_ngrams(seq, vocab_, /*extend=*/true);
    }
  }

  Eigen::VectorXd encode(const AntibodySequence& seq) {
    EncodedSequence raw = encode_raw(seq);
    if (!cfg_.projection_dim) {
      return to_vector(raw);
    }
    if (!projection_) {
      projection_.emplace(raw.dimension(), *cfg_.projection_dim,
                          projection_seed_);
    } else if (raw.dimension() > projection_->input_dim()) {
      projection_->resize_input(raw.dimension());
    }
    return to_vector(projection_->apply(raw));
  }

 private:
  EncodedSequence encode_raw(const AntibodySequence& seq) {
    switch (cfg_.encoder) {
      case EncoderKind::one_hot:
        return encode_one_hot(seq, alphabet_);
      case EncoderKind::ngram:
        return encode_bag_of_ngrams(seq, vocab_, /*extend=*/false);
      case EncoderKind::blosum:
        return encode_blosum(seq, *assets_.blosum);
      case EncoderKind::external:
        return assets_.embeddings->lookup(seq.joined());
    }
    throw std::logic_error("unreachable encoder kind");
  }

  const LoopConfig& cfg_;
  const EncoderAssets& assets_;
  const Alphabet& alphabet_;
  std::uint64_t projection_seed_;
  NgramVocabulary vocab_;
  std::optional<RandomProjection> projection_;
};

struct FullContext {
  const LoopConfig& cfg;
  const AntibodySequence& wild_type;
  const CdrMask& mask;
  const OracleFn& oracle;
  const EncoderAssets& assets;
  const Alphabet& alphabet;
};

void run_full_trial(const FullContext& ctx, int trial, LoopResult& result,
                    RecordWriter* writer) {
  const LoopConfig& cfg = ctx.cfg;
  const RngStream trial_rng(cfg.master_seed,
                            "trial:" + std::to_string(trial));
  FullEncoder encoder(cfg, ctx.assets, ctx.alphabet,
                      trial_rng.derive("proj").stream_seed());

  std::vector<Observation> observations;
  std::unordered_set<std::string> seen;
  double best = std::numeric_limits<double>::infinity();

  auto accept = [&](const AntibodySequence& seq, double value, int iteration,
                    std::optional<double> acquisition) {
    best = std::min(best, value);
    encoder.absorb(seq);
    observations.push_back(Observation{seq, value});
    seen.insert(seq.joined());
    emit(result, writer,
         RunRecord{trial, iteration, seq.heavy(), seq.light(), value, best,
                   acquisition});
  };

  // Initialization: 3 distinct random single mutants at every mask position.
  RngStream init_rng = trial_rng.derive("init");
  const std::string& wt = ctx.wild_type.joined();
  for (std::size_t pos : ctx.mask.indices()) {
    std::vector<char> alternatives;
    alternatives.reserve(ctx.alphabet.residues().size() - 1);
    for (char residue : ctx.alphabet.residues()) {
      if (residue != wt[pos]) {
        alternatives.push_back(residue);
      }
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t j =
          i + init_rng.uniform_int(0, alternatives.size() - 1 - i);
      std::swap(alternatives[i], alternatives[j]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const AntibodySequence mutant =
          ctx.wild_type.apply_mutation(pos, alternatives[i], ctx.alphabet);
      double value = 0.0;
      try {
        value = ctx.oracle(mutant);
      } catch (const std::exception& e) {
        throw std::runtime_error("init mutant at position " +
                                 std::to_string(pos) + ": " + e.what());
      }
      accept(mutant, value, 0, std::nullopt);
    }
  }

  const KernelSpec start_spec = initial_spec(cfg.kernel);
  const GpConfig gp_cfg = gp_config(cfg);

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t train_size = observations.size();

    std::vector<Eigen::VectorXd> inputs;
    Eigen::VectorXd targets(static_cast<Eigen::Index>(train_size));
    inputs.reserve(train_size);
    for (std::size_t i = 0; i < train_size; ++i) {
      inputs.push_back(encoder.encode(observations[i].sequence));
      targets[static_cast<Eigen::Index>(i)] = observations[i].value;
    }
    RngStream fit_rng = trial_rng.derive("fit:" + std::to_string(iter));
    const FittedGp gp = FittedGp::fit(std::move(inputs), std::move(targets),
                                      start_spec, gp_cfg, fit_rng);

    RngStream acq_rng = trial_rng.derive("acq:" + std::to_string(iter));
    std::optional<NoisyEiScorer> scorer;
    if (cfg.acquisition == AcquisitionKind::noisy_ei) {
      scorer.emplace(gp, cfg.mc_samples, acq_rng);
    }
    const double incumbent = best;
    const FitnessFn fitness =
        [&](const std::vector<AntibodySequence>& batch) {
          std::vector<double> out;
          out.reserve(batch.size());
          for (const AntibodySequence& candidate : batch) {
            const Eigen::VectorXd x = encoder.encode(candidate);
            if (scorer) {
              out.push_back(scorer->score(x));
            } else {
              const Prediction p = gp.predict(x);
              out.push_back(
                  expected_improvement(p.mean, p.variance, incumbent));
            }
          }
          return out;
        };

    std::vector<AntibodySequence> seeds;
    seeds.reserve(observations.size() + 1);
    seeds.push_back(ctx.wild_type);
    for (const Observation& o : observations) {
      seeds.push_back(o.sequence);
    }
    RngStream ga_rng = trial_rng.derive("ga:" + std::to_string(iter));
    const ScoredIndividual proposal =
        ga_maximize(fitness, seeds, cfg.ga, ctx.mask, seen, ctx.alphabet,
                    ga_rng);

    double value = 0.0;
    try {
      value = ctx.oracle(proposal.sequence);
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(iter) +
                               " oracle query: " + e.what());
    }
    accept(proposal.sequence, value, iter, proposal.fitness);
    if (writer != nullptr) {
      writer->write_timing(trial, iter, train_size, elapsed_ms(t0));
    }
  }
}

}  // namespace

LoopResult run_validation(const LoopConfig& cfg, const PoolDataset& pool,
                          const EncoderAssets& assets, RecordWriter* writer) {
  cfg.validate();
  if (cfg.mode != LoopMode::validation) {
    throw std::invalid_argument("run_validation needs mode = validation");
  }
  check_assets(cfg, assets);
  if (pool.size() == 0) {
    throw std::invalid_argument("pool '" + pool.label() + "' is empty");
  }

  const Alphabet& alphabet = Alphabet::canonical();

  // The pool is static, so raw encodings are computed once and shared by
  // every trial; projections (per trial) are applied on top.
  ValidationContext ctx{cfg, pool, {}};
  ctx.base.reserve(pool.size());
  switch (cfg.encoder) {
    case EncoderKind::one_hot:
      for (const PoolEntry& e : pool.entries()) {
        ctx.base.push_back(to_vector(encode_one_hot(e.sequence, alphabet)));
      }
      break;
    case EncoderKind::ngram: {
      std::vector<AntibodySequence> sequences;
      sequences.reserve(pool.size());
      for (const PoolEntry& e : pool.entries()) {
        sequences.push_back(e.sequence);
      }
      NgramVocabulary vocab = NgramVocabulary::from_pool(sequences);
      for (const AntibodySequence& s : sequences) {
        ctx.base.push_back(
            to_vector(encode_bag_of_ngrams(s, vocab, /*extend=*/false)));
      }
      break;
    }
    case EncoderKind::blosum:
      for (const PoolEntry& e : pool.entries()) {
        ctx.base.push_back(to_vector(encode_blosum(e.sequence, *assets.blosum)));
      }
      break;
    case EncoderKind::external:
      for (const PoolEntry& e : pool.entries()) {
        ctx.base.push_back(
            to_vector(assets.embeddings->lookup(e.sequence.joined())));
      }
      break;
  }

  LoopResult result;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    try {
      run_validation_trial(ctx, trial, result, writer);
    } catch (const std::exception& e) {
      result.trial_errors.push_back("trial " + std::to_string(trial) + ": " +
                                    e.what());
    }
  }
  return result;
}

LoopResult run_full(const LoopConfig& cfg, const AntibodySequence& wild_type,
                    const CdrMask& mask, const OracleFn& oracle,
                    const EncoderAssets& assets, RecordWriter* writer) {
  cfg.validate();
  if (cfg.mode != LoopMode::full) {
    throw std::invalid_argument("run_full needs mode = full");
  }
  check_assets(cfg, assets);
  if (!oracle) {
    throw std::invalid_argument("oracle is not set");
  }

  const Alphabet alphabet = Alphabet::canonical();
  FullContext ctx{cfg, wild_type, mask, oracle, assets, alphabet};

  LoopResult result;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    try {
      run_full_trial(ctx, trial, result, writer);
    } catch (const std::exception& e) {
      result.trial_errors.push_back("trial " + std::to_string(trial) + ": " +
                                    e.what());
    }
  }
  return result;
}

}  // namespace seqbo
