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

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace seqbo {

// One revealed oracle value.  Iteration 0 marks initialization samples
// (several per trial); loop iterations count from 1.
struct RunRecord {
  int trial = 0;
  int iteration = 0;
  std::string heavy;
  std::string light;
  double oracle_value = 0.0;  // kcal/mol
  double best_so_far = 0.0;   // kcal/mol
  // Acquisition score of the chosen candidate; absent for init records and
  // random acquisition.
  std::optional<double> acquisition_value;
};

// Appends records as JSON lines, flushing after every write so aborted runs
// keep their partial curves.  Wall-clock timings go to a separate sidecar
// file: the records file itself is byte-deterministic for a fixed seed.
class RecordWriter {
 public:
  RecordWriter(const std::string& records_path,
               const std::string& timings_path);

  void write(const RunRecord& record);
  // Sidecar entry for one loop iteration: wall time of the whole step and
  // the training-set size the surrogate saw.
  void write_timing(int trial, int iteration, std::size_t train_size,
                    double wall_ms);

 private:
  std::ofstream records_;
  std::ofstream timings_;
};

std::vector<RunRecord> read_records(const std::string& path);

// Per-trial summary CSV: final best value and the first iteration at which
// it was reached.
void write_summary_csv(const std::string& path,
                       const std::vector<RunRecord>& records);

// Aggregates best-so-far curves across every trial found in the given
// record files into iteration,mean,min,max rows.  All trials must cover the
// same iteration range; the error message lists the offending files.
void write_curves_csv(const std::string& out_path,
                      const std::vector<std::string>& record_paths);

// Best-effort static plot of a curves CSV.
void write_curves_svg(const std::string& out_path,
                      const std::string& curves_csv_path);

struct TimingEntry {
  int trial = 0;
  int iteration = 0;
  std::size_t train_size = 0;
  double wall_ms = 0.0;
};

std::vector<TimingEntry> read_timings(const std::string& path);

// Post-hoc audit of a finished run: per trial, no repeated sequence, exact
// running-minimum best-so-far, contiguous iterations, and (when timings are
// given) surrogate training sizes equal to init count + loop progress.
struct BookkeepingReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

BookkeepingReport validate_bookkeeping(
    const std::vector<RunRecord>& records,
    const std::vector<TimingEntry>& timings = {});

}  // namespace seqbo
