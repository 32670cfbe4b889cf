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

#include "seqbo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "seqbo/rng.hpp"
#include "seqbo/subprocess.hpp"

namespace seqbo {

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double parse_full_double(const std::string& token, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) {
      throw std::invalid_argument(token);
    }
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": bad numeric value '" + token + "'");
  }
}

}  // namespace

PoolDataset::PoolDataset(std::vector<PoolEntry> entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.empty()) {
    throw std::invalid_argument("pool dataset is empty");
  }
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.sequence.length() != entries_.front().sequence.length()) {
      throw std::invalid_argument("pool sequences have inconsistent lengths");
    }
    if (!std::isfinite(e.ddg)) {
      throw std::invalid_argument("pool contains a non-finite value");
    }
    if (!seen.insert(e.sequence.joined()).second) {
      throw std::invalid_argument("pool contains a duplicate sequence");
    }
  }
}

PoolDataset PoolDataset::load_csv(const std::string& path,
                                  const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open pool file: " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  std::vector<PoolEntry> entries;
  std::set<std::string> seen;
  std::size_t expected_length = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line_no == 1) {
      if (line != "heavy_chain,light_chain,ddg") {
        throw std::runtime_error(
            where + ": expected header 'heavy_chain,light_chain,ddg'");
      }
      continue;
    }
    const std::vector<std::string> fields = split_fields(line, ',');
    if (fields.size() != 3) {
      throw std::runtime_error(where + ": expected 3 columns, got " +
                               std::to_string(fields.size()));
    }
    AntibodySequence seq = [&] {
      try {
        return AntibodySequence::parse(fields[0], fields[1], alphabet,
                                       expected_length);
      } catch (const std::exception& e) {
        throw std::runtime_error(where + ": " + e.what());
      }
    }();
    if (expected_length == 0) expected_length = seq.length();
    if (!seen.insert(seq.joined()).second) {
      throw std::runtime_error(where + ": duplicate sequence");
    }
    const double ddg = parse_full_double(fields[2], where);
    entries.push_back({std::move(seq), ddg});
  }
  if (entries.empty()) {
    throw std::runtime_error(path + ": pool file has no data rows");
  }
  return PoolDataset(std::move(entries), path);
}

void PoolDataset::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write pool file: " + path);
  }
  out << "heavy_chain,light_chain,ddg\n";
  std::ostringstream fmt;
  fmt.precision(17);
  for (const auto& e : entries_) {
    fmt.str("");
    fmt << e.ddg;
    out << e.sequence.heavy() << ',' << e.sequence.light() << ','
        << fmt.str() << '\n';
  }
}

void SyntheticOracleSpec::validate() const {
  if (!matrix) {
    throw std::invalid_argument("synthetic oracle needs a substitution matrix");
  }
  if (hidden_target.length() != wild_type.length()) {
    throw std::invalid_argument(
        "synthetic oracle: target length differs from wild type");
  }
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("synthetic oracle: negative noise sigma");
  }
  const CdrMask mask(mask_indices, wild_type);
  for (std::size_t i = 0; i < wild_type.length(); ++i) {
    if (!mask.contains(i) &&
        hidden_target.joined()[i] != wild_type.joined()[i]) {
      throw std::invalid_argument(
          "synthetic oracle: target differs from wild type outside the mask "
          "at position " + std::to_string(i));
    }
  }
  for (const auto& [a, b] : coupled_pairs) {
    if (a == b) {
      throw std::invalid_argument("synthetic oracle: degenerate coupled pair");
    }
    if (!mask.contains(a) || !mask.contains(b)) {
      throw std::invalid_argument(
          "synthetic oracle: coupled pair outside the mask");
    }
  }
}

double synthetic_ddg(const AntibodySequence& seq,
                     const SyntheticOracleSpec& spec) {
  if (seq.length() != spec.wild_type.length()) {
    throw std::invalid_argument(
        "synthetic oracle: query length " + std::to_string(seq.length()) +
        " differs from wild type length " +
        std::to_string(spec.wild_type.length()));
  }
  const std::string& s = seq.joined();
  const std::string& wt = spec.wild_type.joined();
  const std::string& target = spec.hidden_target.joined();
  const double s_b = spec.matrix->max_diagonal();

  double value = 0.0;
  for (const std::size_t i : spec.mask_indices) {
    value -= (spec.matrix->score(s[i], target[i]) -
              spec.matrix->score(wt[i], target[i])) /
             s_b;
  }
  for (const auto& [a, b] : spec.coupled_pairs) {
    if (s[a] == target[a] && s[b] == target[b]) value -= spec.lambda;
  }
  if (spec.noise_sigma > 0.0) {
    RngStream noise(spec.seed, "noise:" + s);
    value += spec.noise_sigma * noise.normal();
  }
  return value;
}

OracleFn make_synthetic_oracle(SyntheticOracleSpec spec) {
  spec.validate();
  return [spec = std::move(spec)](const AntibodySequence& seq) {
    return synthetic_ddg(seq, spec);
  };
}

void SimulatorClientSpec::validate() const {
  if (command.empty()) {
    throw std::invalid_argument("simulator command is empty");
  }
  if (!(timeout_seconds > 0.0)) {
    throw std::invalid_argument("simulator timeout must be positive");
  }
  if (retries < 0) {
    throw std::invalid_argument("simulator retry count must be non-negative");
  }
}

double query_external(const AntibodySequence& seq,
                      const SimulatorClientSpec& spec) {
  spec.validate();
  const std::string input = seq.heavy() + "\t" + seq.light() + "\n";
  std::string last_error;
  for (int attempt = 0; attempt <= spec.retries; ++attempt) {
    const SubprocessResult res =
        run_command(spec.command, input, spec.timeout_seconds);
    if (res.timed_out) {
      last_error = "timed out after " + std::to_string(spec.timeout_seconds) +
                   "s";
      continue;
    }
    if (res.exit_code != 0) {
      last_error = "exit code " + std::to_string(res.exit_code) +
                   ", output: '" + res.output + "'";
      continue;
    }
    // Exactly one decimal number, surrounding whitespace allowed.
    std::string token = res.output;
    const auto first = token.find_first_not_of(" \t\r\n");
    const auto last = token.find_last_not_of(" \t\r\n");
    token = first == std::string::npos
                ? std::string()
                : token.substr(first, last - first + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used == token.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    last_error = "unparsable output: '" + res.output + "'";
  }
  throw std::runtime_error("external oracle failed after " +
                           std::to_string(spec.retries + 1) + " attempt(s): " +
                           last_error);
}

OracleFn make_external_oracle(SimulatorClientSpec spec) {
  spec.validate();
  return [spec = std::move(spec)](const AntibodySequence& seq) {
    return query_external(seq, spec);
  };
}

}  // namespace seqbo
