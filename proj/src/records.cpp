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

#include "seqbo/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace seqbo {

namespace {

// Shortest decimal that round-trips to the same double, so emitted CSVs are
// both exact and stable across runs.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw std::runtime_error("failed to format floating-point value");
  }
  return std::string(buf, ptr);
}

nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["acquisition"] = r.acquisition_value
                         ? nlohmann::json(*r.acquisition_value)
                         : nlohmann::json(nullptr);
  j["best_so_far"] = r.best_so_far;
  j["heavy"] = r.heavy;
  j["iteration"] = r.iteration;
  j["light"] = r.light;
  j["oracle_value"] = r.oracle_value;
  j["trial"] = r.trial;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.trial = j.at("trial").get<int>();
  r.iteration = j.at("iteration").get<int>();
  r.heavy = j.at("heavy").get<std::string>();
  r.light = j.at("light").get<std::string>();
  r.oracle_value = j.at("oracle_value").get<double>();
  r.best_so_far = j.at("best_so_far").get<double>();
  const auto& acq = j.at("acquisition");
  if (!acq.is_null()) {
    r.acquisition_value = acq.get<double>();
  }
  return r;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open " + path + " for reading");
  }
  return in;
}

}  // namespace

RecordWriter::RecordWriter(const std::string& records_path,
                           const std::string& timings_path)
    : records_(open_for_write(records_path)),
      timings_(open_for_write(timings_path)) {}

void RecordWriter::write(const RunRecord& record) {
  records_ << record_to_json(record).dump() << '\n';
  records_.flush();
  if (!records_) {
    throw std::runtime_error("failed to append run record");
  }
}

void RecordWriter::write_timing(int trial, int iteration,
                                std::size_t train_size, double wall_ms) {
  nlohmann::json j;
  j["iteration"] = iteration;
  j["train_size"] = train_size;
  j["trial"] = trial;
  j["wall_ms"] = wall_ms;
  timings_ << j.dump() << '\n';
  timings_.flush();
  if (!timings_) {
    throw std::runtime_error("failed to append timing record");
  }
}

std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad record line: " + e.what());
    }
  }
  return records;
}

std::vector<TimingEntry> read_timings(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<TimingEntry> timings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      TimingEntry t;
      t.trial = j.at("trial").get<int>();
      t.iteration = j.at("iteration").get<int>();
      t.train_size = j.at("train_size").get<std::size_t>();
      t.wall_ms = j.at("wall_ms").get<double>();
      timings.push_back(t);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad timing line: " + e.what());
    }
  }
  return timings;
}

void write_summary_csv(const std::string& path,
                       const std::vector<RunRecord>& records) {
  // Records arrive in run order, so the final best of a trial is the
  // best_so_far of its last record.
  std::map<int, std::vector<const RunRecord*>> by_trial;
  for (const RunRecord& r : records) {
    by_trial[r.trial].push_back(&r);
  }
  std::ofstream out = open_for_write(path);
  out << "trial,final_best,first_best_iteration\n";
  for (const auto& [trial, rows] : by_trial) {
    const double final_best = rows.back()->best_so_far;
    int first_iteration = rows.back()->iteration;
    for (const RunRecord* r : rows) {
      if (r->best_so_far == final_best) {
        first_iteration = r->iteration;
        break;
      }
    }
    out << trial << ',' << format_double(final_best) << ',' << first_iteration
        << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed to write " + path);
  }
}

namespace {

struct Curve {
  std::string source;
  int trial = 0;
  // best_so_far indexed by iteration, 0 = after initialization.
  std::vector<double> best;
};

std::vector<Curve> load_curves(const std::vector<std::string>& paths) {
  std::vector<Curve> curves;
  for (const std::string& path : paths) {
    std::vector<RunRecord> records = read_records(path);
    if (records.empty()) {
      throw std::runtime_error("no records in " + path);
    }
    // Within one trial the last record of an iteration carries the best value
    // reached through that iteration.
    std::map<int, std::map<int, double>> per_trial;
    for (const RunRecord& r : records) {
      per_trial[r.trial][r.iteration] = r.best_so_far;
    }
    for (const auto& [trial, by_iter] : per_trial) {
      Curve curve;
      curve.source = path;
      curve.trial = trial;
      int expected = 0;
      for (const auto& [iteration, best] : by_iter) {
        if (iteration != expected) {
          throw std::runtime_error(
              path + ": trial " + std::to_string(trial) +
              " has non-contiguous iterations (expected " +
              std::to_string(expected) + ", found " +
              std::to_string(iteration) + ")");
        }
        curve.best.push_back(best);
        ++expected;
      }
      curves.push_back(std::move(curve));
    }
  }
  return curves;
}

}  // namespace

void write_curves_csv(const std::string& out_path,
                      const std::vector<std::string>& record_paths) {
  if (record_paths.empty()) {
    throw std::runtime_error("no record files given");
  }
  std::vector<Curve> curves = load_curves(record_paths);
  const std::size_t length = curves.front().best.size();
  bool consistent = true;
  for (const Curve& c : curves) {
    if (c.best.size() != length) {
      consistent = false;
    }
  }
  if (!consistent) {
    std::ostringstream msg;
    msg << "iteration ranges differ across trials:";
    std::set<std::string> seen;
    for (const Curve& c : curves) {
      std::ostringstream entry;
      entry << ' ' << c.source << " (trial " << c.trial << ": 0.."
            << c.best.size() - 1 << ")";
      if (seen.insert(entry.str()).second) {
        msg << entry.str();
      }
    }
    throw std::runtime_error(msg.str());
  }
  std::ofstream out = open_for_write(out_path);
  out << "iteration,mean,min,max\n";
  for (std::size_t i = 0; i < length; ++i) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Curve& c : curves) {
      sum += c.best[i];
      lo = std::min(lo, c.best[i]);
      hi = std::max(hi, c.best[i]);
    }
    out << i << ',' << format_double(sum / static_cast<double>(curves.size()))
        << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed to write " + out_path);
  }
}

namespace {

struct CurveRow {
  double iteration = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

std::vector<CurveRow> read_curves_csv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line) || line != "iteration,mean,min,max") {
    throw std::runtime_error(path + ": expected curves CSV header");
  }
  std::vector<CurveRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::string field;
    CurveRow row;
    double* slots[4] = {&row.iteration, &row.mean, &row.min, &row.max};
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(fields, field, ',')) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected 4 fields");
      }
      try {
        *slots[i] = std::stod(field);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad number '" + field + "'");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  return rows;
}

}  // namespace

void write_curves_svg(const std::string& out_path,
                      const std::string& curves_csv_path) {
  const std::vector<CurveRow> rows = read_curves_csv(curves_csv_path);
  const double width = 720.0;
  const double height = 440.0;
  const double left = 64.0;
  const double right = width - 24.0;
  const double top = 24.0;
  const double bottom = height - 48.0;

  double y_lo = rows.front().min;
  double y_hi = rows.front().max;
  for (const CurveRow& r : rows) {
    y_lo = std::min(y_lo, r.min);
    y_hi = std::max(y_hi, r.max);
  }
  if (y_hi == y_lo) {
    y_hi += 1.0;
    y_lo -= 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  const double x_hi = std::max(rows.back().iteration, 1.0);

  auto sx = [&](double it) {
    return left + (right - left) * it / x_hi;
  };
  auto sy = [&](double v) {
    return bottom - (bottom - top) * (v - y_lo) / (y_hi - y_lo);
  };
  auto coord = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // Min/max envelope as a closed band behind the mean line.
  svg << "<polygon fill=\"#c6dbef\" stroke=\"none\" points=\"";
  for (const CurveRow& r : rows) {
    svg << coord(sx(r.iteration)) << ',' << coord(sy(r.max)) << ' ';
  }
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    svg << coord(sx(it->iteration)) << ',' << coord(sy(it->min)) << ' ';
  }
  svg << "\"/>\n";

  svg << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" "
         "points=\"";
  for (const CurveRow& r : rows) {
    svg << coord(sx(r.iteration)) << ',' << coord(sy(r.mean)) << ' ';
  }
  svg << "\"/>\n";

  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(bottom)
      << "\" x2=\"" << coord(right) << "\" y2=\"" << coord(bottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\""
      << coord(left) << "\" y2=\"" << coord(bottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << coord((left + right) / 2.0) << "\" y=\""
      << coord(height - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">iteration</text>\n";
  svg << "<text x=\"" << coord(left) << "\" y=\"" << coord(bottom + 18.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">0</text>\n";
  svg << "<text x=\"" << coord(right) << "\" y=\"" << coord(bottom + 18.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">" << format_double(x_hi) << "</text>\n";
  svg << "<text x=\"" << coord(left - 8.0) << "\" y=\"" << coord(bottom)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"end\">" << format_double(y_lo + pad) << "</text>\n";
  svg << "<text x=\"" << coord(left - 8.0) << "\" y=\"" << coord(top + 4.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"end\">" << format_double(y_hi - pad) << "</text>\n";
  svg << "<text x=\"" << coord(left - 44.0) << "\" y=\""
      << coord((top + bottom) / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 " << coord(left - 44.0)
      << " " << coord((top + bottom) / 2.0)
      << ")\">best-so-far (kcal/mol)</text>\n";
  svg << "</svg>\n";

  std::ofstream out = open_for_write(out_path);
  out << svg.str();
  if (!out) {
    throw std::runtime_error("failed to write " + out_path);
  }
}

BookkeepingReport validate_bookkeeping(const std::vector<RunRecord>& records,
                                       const std::vector<TimingEntry>& timings) {
  BookkeepingReport report;
  auto complain = [&report](const std::string& message) {
    report.violations.push_back(message);
  };

  std::map<int, std::vector<const RunRecord*>> by_trial;
  for (const RunRecord& r : records) {
    by_trial[r.trial].push_back(&r);
  }
  if (by_trial.empty()) {
    complain("no records");
    return report;
  }

  std::map<int, std::size_t> init_counts;
  std::map<int, int> last_iterations;
  for (const auto& [trial, rows] : by_trial) {
    const std::string label = "trial " + std::to_string(trial);

    std::unordered_set<std::string> seen;
    double running_min = std::numeric_limits<double>::infinity();
    int previous_iteration = 0;
    std::size_t init_count = 0;
    bool in_init = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const RunRecord& r = *rows[i];
      const std::string joined = r.heavy + "|" + r.light;
      if (!seen.insert(joined).second) {
        complain(label + ": sequence queried twice (" + joined + ")");
      }
      running_min = std::min(running_min, r.oracle_value);
      if (r.best_so_far != running_min) {
        complain(label + ", iteration " + std::to_string(r.iteration) +
                 ": best_so_far " + format_double(r.best_so_far) +
                 " is not the running minimum " + format_double(running_min));
      }
      if (r.iteration == 0) {
        if (!in_init) {
          complain(label + ": initialization record after iteration " +
                   std::to_string(previous_iteration));
        }
        ++init_count;
      } else {
        if (in_init && init_count == 0) {
          complain(label + ": no initialization records");
        }
        in_init = false;
        if (r.iteration != previous_iteration + 1) {
          complain(label + ": iteration " + std::to_string(r.iteration) +
                   " follows " + std::to_string(previous_iteration));
        }
        if (r.acquisition_value &&
            !std::isfinite(*r.acquisition_value)) {
          complain(label + ", iteration " + std::to_string(r.iteration) +
                   ": non-finite acquisition value");
        }
        previous_iteration = r.iteration;
      }
      if (r.iteration == 0 && r.acquisition_value) {
        complain(label + ": initialization record carries an acquisition "
                 "value");
      }
    }
    if (init_count == 0) {
      complain(label + ": no initialization records");
    }
    init_counts[trial] = init_count;
    last_iterations[trial] = previous_iteration;
  }

  for (const TimingEntry& t : timings) {
    const std::string label = "trial " + std::to_string(t.trial);
    auto it = init_counts.find(t.trial);
    if (it == init_counts.end()) {
      complain("timing entry for unknown " + label);
      continue;
    }
    if (t.iteration < 1 || t.iteration > last_iterations[t.trial]) {
      complain(label + ": timing entry for iteration " +
               std::to_string(t.iteration) + " outside 1.." +
               std::to_string(last_iterations[t.trial]));
      continue;
    }
    const std::size_t expected =
        it->second + static_cast<std::size_t>(t.iteration) - 1;
    if (t.train_size != expected) {
      complain(label + ", iteration " + std::to_string(t.iteration) +
               ": training size " + std::to_string(t.train_size) +
               " does not equal init count plus completed iterations (" +
               std::to_string(expected) + ")");
    }
    if (!(t.wall_ms >= 0.0)) {
      complain(label + ", iteration " + std::to_string(t.iteration) +
               ": negative wall time");
    }
  }

  return report;
}

}  // namespace seqbo
