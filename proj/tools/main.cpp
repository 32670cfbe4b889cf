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

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "seqbo/loops.hpp"
#include "seqbo/records.hpp"
#include "seqbo/runconfig.hpp"

namespace {

// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, ptr);
}

struct RunArgs {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  bool svg = false;
};

struct SequenceArgs {
  std::string config;
  std::string heavy;
  std::string light;
  std::vector<std::string> overrides;
  int trial = 0;
};

struct CurvesArgs {
  std::vector<std::string> records;
  std::string out;
  std::string svg;
};

void add_overrides_option(CLI::App* cmd, std::vector<std::string>& sink) {
  cmd->add_option("--set", sink,
                  "Config override, key=value with dotted keys "
                  "(e.g. --set oracle.lambda=0.1); repeatable");
}

int cmd_run(const RunArgs& args, seqbo::LoopMode mode) {
  namespace fs = std::filesystem;
  std::optional<seqbo::RunConfig> cfg;
  seqbo::EncoderAssets assets;
  std::optional<seqbo::PoolDataset> pool;
  std::optional<seqbo::AntibodySequence> wild_type;
  std::optional<seqbo::CdrMask> mask;
  seqbo::OracleFn oracle;
  try {
    cfg = seqbo::load_run_config(args.config, args.overrides);
    if (cfg->loop.mode != mode) {
      throw std::invalid_argument(
          std::string("config mode '") + seqbo::loop_mode_name(cfg->loop.mode) +
          "' does not match this subcommand; set \"mode\": \"" +
          seqbo::loop_mode_name(mode) + "\" or pass --set mode=" +
          seqbo::loop_mode_name(mode));
    }
    assets = seqbo::build_assets(*cfg);
    if (mode == seqbo::LoopMode::validation) {
      pool.emplace(seqbo::PoolDataset::load_csv(cfg->pool_path, seqbo::Alphabet::canonical()));
    } else {
      wild_type.emplace(seqbo::wild_type_from(*cfg));
      mask.emplace(seqbo::mask_from(*cfg, *wild_type));
      oracle = seqbo::oracle_from(*cfg, *wild_type);
    }
    fs::create_directories(args.out);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const fs::path out(args.out);
    const std::string records_path = (out / "records.jsonl").string();
    seqbo::RecordWriter writer(records_path, (out / "timings.jsonl").string());
    const seqbo::LoopResult result =
        mode == seqbo::LoopMode::validation
            ? seqbo::run_validation(cfg->loop, *pool, assets, &writer)
            : seqbo::run_full(cfg->loop, *wild_type, *mask, oracle, assets,
                              &writer);

    seqbo::write_summary_csv((out / "summary.csv").string(), result.records);
    try {
      seqbo::write_curves_csv((out / "curves.csv").string(), {records_path});
      if (args.svg) {
        seqbo::write_curves_svg((out / "curves.svg").string(),
                                (out / "curves.csv").string());
      }
    } catch (const std::exception& e) {
      // Partial trials can leave uneven curves; keep the records and report.
      if (result.trial_errors.empty()) {
        throw;
      }
      std::cerr << "curves skipped: " << e.what() << '\n';
    }

    if (!result.trial_errors.empty()) {
      for (const std::string& message : result.trial_errors) {
        std::cerr << "trial failed: " << message << '\n';
      }
      return kRuntimeError;
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_encode(const SequenceArgs& args) {
  std::optional<seqbo::RunConfig> cfg;
  seqbo::EncoderAssets assets;
  std::optional<seqbo::AntibodySequence> seq;
  try {
    cfg = seqbo::load_run_config(args.config, args.overrides);
    assets = seqbo::build_assets(*cfg);
    seq.emplace(seqbo::AntibodySequence::parse(args.heavy, args.light,
                                               seqbo::Alphabet::canonical()));
    if (args.trial < 0) {
      throw std::invalid_argument("--trial must be nonnegative");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const seqbo::Alphabet& alphabet = seqbo::Alphabet::canonical();
    seqbo::EncodedSequence encoded{{}, ""};
    switch (cfg->loop.encoder) {
      case seqbo::EncoderKind::one_hot:
        encoded = seqbo::encode_one_hot(*seq, alphabet);
        break;
      case seqbo::EncoderKind::ngram: {
        seqbo::NgramVocabulary vocab;
        if (!cfg->pool_path.empty()) {
          const seqbo::PoolDataset pool =
              seqbo::PoolDataset::load_csv(cfg->pool_path, seqbo::Alphabet::canonical());
          std::vector<seqbo::AntibodySequence> sequences;
          sequences.reserve(pool.size());
          for (const seqbo::PoolEntry& entry : pool.entries()) {
            sequences.push_back(entry.sequence);
          }
          vocab = seqbo::NgramVocabulary::from_pool(sequences);
          encoded = seqbo::encode_bag_of_ngrams(*seq, vocab, false);
        } else {
          encoded = seqbo::encode_bag_of_ngrams(*seq, vocab, true);
        }
        break;
      }
      case seqbo::EncoderKind::blosum:
        encoded = seqbo::encode_blosum(*seq, *assets.blosum);
        break;
      case seqbo::EncoderKind::external:
        encoded = assets.embeddings->lookup(seq->joined());
        break;
    }
    if (cfg->loop.projection_dim) {
      // Same per-trial projection the experiment loops use.
      const seqbo::RngStream trial_rng(cfg->loop.master_seed,
                                       "trial:" + std::to_string(args.trial));
      const seqbo::RandomProjection proj(
          encoded.dimension(), *cfg->loop.projection_dim,
          trial_rng.derive("proj").stream_seed());
      encoded = proj.apply(encoded);
    }
    for (std::size_t i = 0; i < encoded.values.size(); ++i) {
      if (i > 0) {
        std::cout << '\t';
      }
      std::cout << format_double(encoded.values[i]);
    }
    std::cout << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "encode failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_oracle_eval(const SequenceArgs& args) {
  seqbo::OracleFn oracle;
  try {
    const seqbo::RunConfig cfg =
        seqbo::load_run_config(args.config, args.overrides);
    if (cfg.synthetic_oracle) {
      oracle = seqbo::oracle_from(cfg, seqbo::wild_type_from(cfg));
    } else if (cfg.external_oracle) {
      seqbo::SimulatorClientSpec spec;
      spec.command = cfg.external_oracle->command;
      spec.timeout_seconds = cfg.external_oracle->timeout_seconds;
      spec.retries = cfg.external_oracle->retries;
      oracle = seqbo::make_external_oracle(std::move(spec));
    } else {
      throw std::invalid_argument("config has no oracle");
    }
    if (args.heavy.empty() != args.light.empty()) {
      throw std::invalid_argument("--heavy and --light go together");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const seqbo::Alphabet& alphabet = seqbo::Alphabet::canonical();
  try {
    if (!args.heavy.empty()) {
      const seqbo::AntibodySequence seq =
          seqbo::AntibodySequence::parse(args.heavy, args.light, alphabet);
      std::cout << format_double(oracle(seq)) << '\n';
      return kOk;
    }
    // Batch mode: heavy<TAB>light per stdin line, one value per line out.
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(std::cin, line)) {
      ++line_no;
      if (line.empty()) {
        continue;
      }
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw std::runtime_error("stdin:" + std::to_string(line_no) +
                                 ": expected heavy<TAB>light");
      }
      const seqbo::AntibodySequence seq = seqbo::AntibodySequence::parse(
          line.substr(0, tab), line.substr(tab + 1), alphabet);
      std::cout << format_double(oracle(seq)) << '\n';
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "oracle-eval failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_curves(const CurvesArgs& args) {
  try {
    seqbo::write_curves_csv(args.out, args.records);
    if (!args.svg.empty()) {
      seqbo::write_curves_svg(args.svg, args.out);
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "curves failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "seqbo: Bayesian-optimization engine for protein-sequence mutants"};
  app.require_subcommand(1);

  RunArgs validate_args;
  CLI::App* validate =
      app.add_subcommand("validate", "Replay BO against a pooled dataset");
  validate->add_option("--config", validate_args.config, "JSON run config")
      ->required();
  validate->add_option("--out", validate_args.out, "Output directory")
      ->required();
  add_overrides_option(validate, validate_args.overrides);
  validate->add_flag("--svg", validate_args.svg, "Also render curves.svg");

  RunArgs full_args;
  CLI::App* full = app.add_subcommand(
      "full", "Run BO against a live oracle with GA-proposed mutants");
  full->add_option("--config", full_args.config, "JSON run config")
      ->required();
  full->add_option("--out", full_args.out, "Output directory")->required();
  add_overrides_option(full, full_args.overrides);
  full->add_flag("--svg", full_args.svg, "Also render curves.svg");

  SequenceArgs encode_args;
  CLI::App* encode = app.add_subcommand(
      "encode", "Print the configured encoding of one sequence");
  encode->add_option("--config", encode_args.config, "JSON run config")
      ->required();
  encode->add_option("--heavy", encode_args.heavy, "Heavy chain")->required();
  encode->add_option("--light", encode_args.light, "Light chain")->required();
  encode->add_option("--trial", encode_args.trial,
                     "Trial whose projection to apply (default 0)");
  add_overrides_option(encode, encode_args.overrides);

  SequenceArgs oracle_args;
  CLI::App* oracle_eval = app.add_subcommand(
      "oracle-eval",
      "Evaluate the configured oracle (flags or heavy<TAB>light stdin lines)");
  oracle_eval->add_option("--config", oracle_args.config, "JSON run config")
      ->required();
  oracle_eval->add_option("--heavy", oracle_args.heavy, "Heavy chain");
  oracle_eval->add_option("--light", oracle_args.light, "Light chain");
  add_overrides_option(oracle_eval, oracle_args.overrides);

  CurvesArgs curves_args;
  CLI::App* curves = app.add_subcommand(
      "curves", "Aggregate record files into a best-so-far curve CSV");
  curves->add_option("records", curves_args.records, "records.jsonl files")
      ->required();
  curves->add_option("--out", curves_args.out, "Output CSV path")->required();
  curves->add_option("--svg", curves_args.svg, "Optional SVG plot path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (validate->parsed()) {
    return cmd_run(validate_args, seqbo::LoopMode::validation);
  }
  if (full->parsed()) {
    return cmd_run(full_args, seqbo::LoopMode::full);
  }
  if (encode->parsed()) {
    return cmd_encode(encode_args);
  }
  if (oracle_eval->parsed()) {
    return cmd_oracle_eval(oracle_args);
  }
  if (curves->parsed()) {
    return cmd_curves(curves_args);
  }
  std::cerr << "no subcommand given\n";
  return kConfigError;
}
