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

#include <string>
#include <vector>

#include "seqbo/gp.hpp"

namespace seqbo {

enum class AcquisitionKind { ei, noisy_ei, random };

const char* acquisition_kind_name(AcquisitionKind kind);
AcquisitionKind parse_acquisition_kind(const std::string& name);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::ei;
  int mc_samples = 128;  // noisy_ei only

  // Throws std::invalid_argument when kind = noisy_ei and mc_samples < 16.
  void validate() const;
};

// Analytic expected improvement under the minimization convention:
// EI = (incumbent - mean) * cdf(z) + sigma * pdf(z), z = (incumbent - mean)
// / sigma; at sigma = 0 it degenerates to max(incumbent - mean, 0).
// Variance below -1e-12 is an error; tiny negatives clamp to zero.
double expected_improvement(double mean, double variance, double incumbent);

// Quasi Monte Carlo noisy expected improvement.  One scorer draws a shared
// set of joint posterior samples at the training inputs; each candidate is
// then scored through its conditional distribution given those samples, so
// every candidate sees common random numbers.
class NoisyEiScorer {
 public:
  NoisyEiScorer(const FittedGp& gp, int mc_samples, RngStream& rng);

  double score(const EncodedSequence& x) const;
  double score(const Eigen::VectorXd& x) const;
  // From a precomputed cross-kernel vector and self-kernel value.
  double score_from_kvec(const Eigen::VectorXd& kvec, double kself) const;

 private:
  const FittedGp& gp_;
  Eigen::MatrixXd w_cross_;   // L^{-1} K_tt
  Eigen::MatrixXd post_chol_; // lower Cholesky of posterior train covariance
  Eigen::MatrixXd z_;         // samples x (n + 1) standard normal QMC draws
  Eigen::VectorXd train_min_; // per-sample minimum over training inputs
};

// Scores every candidate with one shared QMC sample set.
std::vector<double> noisy_expected_improvement(
    const FittedGp& gp, const std::vector<EncodedSequence>& candidates,
    const AcquisitionSpec& spec, RngStream& rng);

// The random baseline: i.i.d. uniform scores, one per candidate.
std::vector<double> random_scores(std::size_t count, RngStream& rng);

// Index of the maximum score; ties break to the lowest index.
std::size_t argmax_score(const std::vector<double>& scores);

}  // namespace seqbo
