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

#include "seqbo/runconfig.hpp"

#include <fstream>
#include <initializer_list>
#include <memory>
#include <stdexcept>

#include "json.hpp"

#include "seqbo/substitution.hpp"

namespace seqbo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* name : allowed) {
      if (it.key() == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail("unknown config key '" + prefix + it.key() + "'");
    }
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  // Explicit null means "unset", same as absent.
  if (it == obj.end() || it->is_null()) {
    return nullptr;
  }
  return &*it;
}

std::string as_string(const json& v, const std::string& name) {
  if (!v.is_string()) {
    fail("config key '" + name + "': expected a string");
  }
  return v.get<std::string>();
}

double as_double(const json& v, const std::string& name) {
  if (!v.is_number()) {
    fail("config key '" + name + "': expected a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) {
    fail("config key '" + name + "': expected an integer");
  }
  return v.get<int>();
}

std::uint64_t as_uint(const json& v, const std::string& name) {
  if (!v.is_number_unsigned()) {
    fail("config key '" + name + "': expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& prefix, std::string fallback) {
  const json* v = find(obj, key);
  return v ? as_string(*v, prefix + key) : std::move(fallback);
}

double get_double(const json& obj, const std::string& key,
                  const std::string& prefix, double fallback) {
  const json* v = find(obj, key);
  return v ? as_double(*v, prefix + key) : fallback;
}

int get_int(const json& obj, const std::string& key,
            const std::string& prefix, int fallback) {
  const json* v = find(obj, key);
  return v ? as_int(*v, prefix + key) : fallback;
}

std::uint64_t get_uint(const json& obj, const std::string& key,
                       const std::string& prefix, std::uint64_t fallback) {
  const json* v = find(obj, key);
  return v ? as_uint(*v, prefix + key) : fallback;
}

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "fixed") {
    return NoiseMode::fixed;
  }
  if (name == "learned") {
    return NoiseMode::learned;
  }
  fail("unknown noise_mode '" + name + "' (expected fixed or learned)");
}

// Mask entries are nonnegative integers or inclusive "a-b" range strings.
std::vector<std::size_t> parse_mask(const json& v) {
  if (!v.is_array()) {
    fail("config key 'cdr_mask': expected an array");
  }
  std::vector<std::size_t> mask;
  for (const json& item : v) {
    if (item.is_number_unsigned()) {
      mask.push_back(item.get<std::size_t>());
    } else if (item.is_string()) {
      const std::string text = item.get<std::string>();
      const auto dash = text.find('-');
      if (dash == std::string::npos || dash == 0 ||
          dash + 1 == text.size()) {
        fail("config key 'cdr_mask': bad range '" + text + "'");
      }
      std::size_t lo = 0;
      std::size_t hi = 0;
      try {
        std::size_t used = 0;
        lo = std::stoull(text.substr(0, dash), &used);
        if (used != dash) {
          throw std::invalid_argument(text);
        }
        hi = std::stoull(text.substr(dash + 1), &used);
        if (used != text.size() - dash - 1) {
          throw std::invalid_argument(text);
        }
      } catch (const std::exception&) {
        fail("config key 'cdr_mask': bad range '" + text + "'");
      }
      if (lo > hi) {
        fail("config key 'cdr_mask': descending range '" + text + "'");
      }
      for (std::size_t i = lo; i <= hi; ++i) {
        mask.push_back(i);
      }
    } else {
      fail("config key 'cdr_mask': entries must be indices or 'a-b' ranges");
    }
  }
  return mask;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(
    const json& v, const std::string& name) {
  if (!v.is_array()) {
    fail("config key '" + name + "': expected an array of [i, j] pairs");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const json& item : v) {
    if (!item.is_array() || item.size() != 2 ||
        !item[0].is_number_unsigned() || !item[1].is_number_unsigned()) {
      fail("config key '" + name + "': expected [i, j] index pairs");
    }
    pairs.emplace_back(item[0].get<std::size_t>(),
                       item[1].get<std::size_t>());
  }
  return pairs;
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail("override must look like key=value: '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;  // unquoted strings pass through as-is
  }

  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    segments.push_back(
        key.substr(start, dot == std::string::npos ? dot : dot - start));
    if (segments.back().empty()) {
      fail("override key '" + key + "' has an empty segment");
    }
    if (dot == std::string::npos) {
      break;
    }
    start = dot + 1;
  }

  json* node = &root;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    json& next = (*node)[segments[i]];
    if (next.is_null()) {
      next = json::object();
    } else if (!next.is_object()) {
      fail("override key '" + key + "' descends into a non-object");
    }
    node = &next;
  }
  (*node)[segments.back()] = value;
}

GaConfig parse_ga(const json& obj) {
  check_keys(obj, "ga.",
             {"population_size", "generations", "offspring", "crossover_prob",
              "elite_fraction"});
  GaConfig ga;
  ga.population_size =
      get_int(obj, "population_size", "ga.", ga.population_size);
  ga.generations = get_int(obj, "generations", "ga.", ga.generations);
  ga.offspring = get_int(obj, "offspring", "ga.", ga.offspring);
  ga.crossover_prob =
      get_double(obj, "crossover_prob", "ga.", ga.crossover_prob);
  ga.elite_fraction =
      get_double(obj, "elite_fraction", "ga.", ga.elite_fraction);
  return ga;
}

RunConfig parse_config(json root) {
  if (!root.is_object()) {
    fail("config must be a JSON object");
  }
  check_keys(root, "",
             {"mode", "iterations", "trials", "init_fraction", "encoder",
              "kernel", "projection_dim", "acquisition", "mc_samples",
              "noise_mode", "noise_variance", "master_seed", "ga", "pool",
              "embeddings", "blosum", "wild_type", "cdr_mask", "oracle"});

  RunConfig cfg;
  LoopConfig& loop = cfg.loop;
  loop.mode = parse_loop_mode(get_string(root, "mode", "", "validation"));
  const bool full = loop.mode == LoopMode::full;
  loop.iterations = get_int(root, "iterations", "", full ? 50 : 200);
  loop.trials = get_int(root, "trials", "", full ? 3 : 10);
  loop.init_fraction = get_double(root, "init_fraction", "", 0.01);
  loop.encoder = parse_encoder_kind(get_string(root, "encoder", "", "one_hot"));
  loop.kernel = parse_kernel_family(get_string(root, "kernel", "", "tanimoto"));
  if (const json* v = find(root, "projection_dim")) {
    loop.projection_dim = as_uint(*v, "projection_dim");
  }
  loop.acquisition =
      parse_acquisition_kind(get_string(root, "acquisition", "", "ei"));
  loop.mc_samples = get_int(root, "mc_samples", "", 128);
  loop.noise_mode =
      parse_noise_mode(get_string(root, "noise_mode", "", "fixed"));
  loop.noise_variance = get_double(root, "noise_variance", "", 1e-4);
  loop.master_seed = get_uint(root, "master_seed", "", 0);
  if (const json* v = find(root, "ga")) {
    if (!v->is_object()) {
      fail("config key 'ga': expected an object");
    }
    loop.ga = parse_ga(*v);
  }

  cfg.pool_path = get_string(root, "pool", "", "");
  cfg.embeddings_path = get_string(root, "embeddings", "", "");
  cfg.blosum_path = get_string(root, "blosum", "", "");

  if (const json* v = find(root, "wild_type")) {
    if (!v->is_object()) {
      fail("config key 'wild_type': expected an object");
    }
    check_keys(*v, "wild_type.", {"heavy", "light"});
    cfg.wild_type_heavy = get_string(*v, "heavy", "wild_type.", "");
    cfg.wild_type_light = get_string(*v, "light", "wild_type.", "");
  }
  if (const json* v = find(root, "cdr_mask")) {
    cfg.cdr_mask = parse_mask(*v);
  }

  if (const json* v = find(root, "oracle")) {
    if (!v->is_object()) {
      fail("config key 'oracle': expected an object");
    }
    const std::string kind = get_string(*v, "kind", "oracle.", "");
    if (kind == "synthetic") {
      check_keys(*v, "oracle.",
                 {"kind", "target", "lambda", "coupled_pairs", "noise_sigma",
                  "seed"});
      SyntheticOracleConfig oracle;
      const json* target = find(*v, "target");
      if (target == nullptr || !target->is_object()) {
        fail("config key 'oracle.target': expected an object");
      }
      check_keys(*target, "oracle.target.", {"heavy", "light"});
      oracle.target_heavy = get_string(*target, "heavy", "oracle.target.", "");
      oracle.target_light = get_string(*target, "light", "oracle.target.", "");
      oracle.lambda = get_double(*v, "lambda", "oracle.", oracle.lambda);
      if (const json* pairs = find(*v, "coupled_pairs")) {
        oracle.coupled_pairs = parse_pairs(*pairs, "oracle.coupled_pairs");
      }
      oracle.noise_sigma =
          get_double(*v, "noise_sigma", "oracle.", oracle.noise_sigma);
      oracle.seed = get_uint(*v, "seed", "oracle.", oracle.seed);
      cfg.synthetic_oracle = std::move(oracle);
    } else if (kind == "external") {
      check_keys(*v, "oracle.",
                 {"kind", "command", "timeout_seconds", "retries"});
      ExternalOracleConfig oracle;
      oracle.command = get_string(*v, "command", "oracle.", "");
      if (oracle.command.empty()) {
        fail("config key 'oracle.command' is required");
      }
      oracle.timeout_seconds =
          get_double(*v, "timeout_seconds", "oracle.", oracle.timeout_seconds);
      oracle.retries = get_int(*v, "retries", "oracle.", oracle.retries);
      cfg.external_oracle = std::move(oracle);
    } else {
      fail("config key 'oracle.kind': expected synthetic or external");
    }
  }

  // Mode- and encoder-dependent requirements.
  if (loop.mode == LoopMode::validation && cfg.pool_path.empty()) {
    fail("validation mode needs a 'pool' path");
  }
  if (full) {
    if (cfg.wild_type_heavy.empty() || cfg.wild_type_light.empty()) {
      fail("full mode needs wild_type.heavy and wild_type.light");
    }
    if (cfg.cdr_mask.empty()) {
      fail("full mode needs a non-empty cdr_mask");
    }
    if (!cfg.synthetic_oracle && !cfg.external_oracle) {
      fail("full mode needs an oracle");
    }
  }
  if (loop.encoder == EncoderKind::external && cfg.embeddings_path.empty()) {
    fail("encoder 'external' needs an 'embeddings' path");
  }
  if (loop.encoder == EncoderKind::blosum && cfg.blosum_path.empty()) {
    fail("encoder 'blosum' needs a 'blosum' path");
  }
  if (cfg.synthetic_oracle && cfg.blosum_path.empty()) {
    fail("the synthetic oracle needs a 'blosum' path");
  }

  loop.validate();
  return cfg;
}

}  // namespace

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open config " + path);
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  if (!root.is_object()) {
    throw std::invalid_argument(path + ": config must be a JSON object");
  }
  for (const std::string& assignment : overrides) {
    apply_override(root, assignment);
  }
  return parse_config(std::move(root));
}

EncoderAssets build_assets(const RunConfig& cfg) {
  EncoderAssets assets;
  if (cfg.loop.encoder == EncoderKind::blosum) {
    const SubstitutionMatrix matrix =
        SubstitutionMatrix::load_ncbi(cfg.blosum_path, Alphabet::canonical());
    assets.blosum = std::make_shared<FlipSpectrumEmbedding>(
        FlipSpectrumEmbedding::build(matrix.matrix()));
  }
  if (cfg.loop.encoder == EncoderKind::external) {
    assets.embeddings = std::make_shared<EmbeddingTable>(
        EmbeddingTable::load(cfg.embeddings_path));
  }
  return assets;
}

AntibodySequence wild_type_from(const RunConfig& cfg) {
  return AntibodySequence::parse(cfg.wild_type_heavy, cfg.wild_type_light,
                                 Alphabet::canonical());
}

CdrMask mask_from(const RunConfig& cfg, const AntibodySequence& wild_type) {
  return CdrMask(cfg.cdr_mask, wild_type);
}

OracleFn oracle_from(const RunConfig& cfg,
                     const AntibodySequence& wild_type) {
  if (cfg.synthetic_oracle) {
    const SyntheticOracleConfig& oc = *cfg.synthetic_oracle;
    SyntheticOracleSpec spec{
        wild_type,
        AntibodySequence::parse(oc.target_heavy, oc.target_light,
                                Alphabet::canonical(), wild_type.length()),
        cfg.cdr_mask,
        oc.lambda,
        oc.coupled_pairs,
        oc.noise_sigma,
        oc.seed,
        std::make_shared<SubstitutionMatrix>(SubstitutionMatrix::load_ncbi(
            cfg.blosum_path, Alphabet::canonical()))};
    return make_synthetic_oracle(std::move(spec));
  }
  if (cfg.external_oracle) {
    SimulatorClientSpec spec;
    spec.command = cfg.external_oracle->command;
    spec.timeout_seconds = cfg.external_oracle->timeout_seconds;
    spec.retries = cfg.external_oracle->retries;
    return make_external_oracle(std::move(spec));
  }
  throw std::invalid_argument("config has no oracle");
}

}  // namespace seqbo
