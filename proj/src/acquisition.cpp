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

#include "seqbo/acquisition.hpp"

#include <cmath>
#include <stdexcept>

#include "seqbo/sobol.hpp"
#include "seqbo/stats.hpp"

namespace seqbo {

const char* acquisition_kind_name(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::ei:
      return "ei";
    case AcquisitionKind::noisy_ei:
      return "noisy_ei";
    case AcquisitionKind::random:
      return "random";
  }
  throw std::logic_error("unknown acquisition kind");
}

AcquisitionKind parse_acquisition_kind(const std::string& name) {
  if (name == "ei") return AcquisitionKind::ei;
  if (name == "noisy_ei") return AcquisitionKind::noisy_ei;
  if (name == "random") return AcquisitionKind::random;
  throw std::invalid_argument("unknown acquisition kind '" + name + "'");
}

void AcquisitionSpec::validate() const {
  if (kind == AcquisitionKind::noisy_ei && mc_samples < 16) {
    throw std::invalid_argument(
        "noisy_ei requires at least 16 Monte Carlo samples");
  }
}

double expected_improvement(double mean, double variance, double incumbent) {
  if (variance < -1e-12) {
    throw std::invalid_argument("expected_improvement: negative variance " +
                                std::to_string(variance));
  }
  const double improvement = incumbent - mean;
  const double sigma = std::sqrt(std::max(0.0, variance));
  if (sigma == 0.0) return std::max(improvement, 0.0);
  const double z = improvement / sigma;
  return std::max(0.0,
                  improvement * normal_cdf(z) + sigma * normal_pdf(z));
}

NoisyEiScorer::NoisyEiScorer(const FittedGp& gp, int mc_samples,
                             RngStream& rng)
    : gp_(gp) {
  if (gp.size() == 0) {
    throw std::invalid_argument("noisy EI requires a fitted model");
  }
  if (mc_samples < 1) {
    throw std::invalid_argument("noisy EI requires at least one sample");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(gp.size());
  const Eigen::MatrixXd& k_train = gp.prior_train_covariance();
  const Eigen::MatrixXd& chol = gp.cholesky_lower();

  w_cross_ = chol.triangularView<Eigen::Lower>().solve(k_train);
  Eigen::MatrixXd post_cov = k_train - w_cross_.transpose() * w_cross_;
  post_cov = 0.5 * (post_cov + post_cov.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 1e-12;
  for (;;) {
    Eigen::MatrixXd shifted = post_cov;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) break;
    if (jitter >= 1e-4) {
      throw std::runtime_error(
          "noisy EI: posterior covariance could not be factorized");
    }
    jitter *= 10.0;
  }
  post_chol_ = llt.matrixL();

  const Eigen::VectorXd post_mean =
      Eigen::VectorXd::Constant(n, gp.mean_constant()) + k_train * gp.alpha();

  // Shared scrambled low-discrepancy normals: n coordinates drive the
  // training block, the last one drives each candidate's conditional.
  SobolSampler sampler(static_cast<std::size_t>(n) + 1, rng);
  z_.resize(mc_samples, n + 1);
  for (int s = 0; s < mc_samples; ++s) {
    const std::vector<double> u = sampler.next();
    for (Eigen::Index j = 0; j < n + 1; ++j) {
      z_(s, j) = inverse_normal_cdf(u[static_cast<std::size_t>(j)]);
    }
  }

  train_min_.resize(mc_samples);
  for (int s = 0; s < mc_samples; ++s) {
    const Eigen::VectorXd draw =
        post_mean + post_chol_ * z_.row(s).head(n).transpose();
    train_min_[s] = draw.minCoeff();
  }
}

double NoisyEiScorer::score_from_kvec(const Eigen::VectorXd& kvec,
                                      double kself) const {
  const Eigen::Index n = static_cast<Eigen::Index>(gp_.size());
  const double cand_mean = gp_.mean_constant() + kvec.dot(gp_.alpha());
  const Eigen::VectorXd v =
      gp_.cholesky_lower().triangularView<Eigen::Lower>().solve(kvec);
  const double cand_var = kself - v.squaredNorm();
  const Eigen::VectorXd cross = kvec - w_cross_.transpose() * v;
  const Eigen::VectorXd w =
      post_chol_.triangularView<Eigen::Lower>().solve(cross);
  const double resid_sd =
      std::sqrt(std::max(0.0, cand_var - w.squaredNorm()));

  double total = 0.0;
  const int samples = static_cast<int>(z_.rows());
  for (int s = 0; s < samples; ++s) {
    const double cand_draw = cand_mean + z_.row(s).head(n).dot(w) +
                             resid_sd * z_(s, n);
    total += std::max(0.0, train_min_[s] - cand_draw);
  }
  return total / samples;
}

double NoisyEiScorer::score(const Eigen::VectorXd& x) const {
  return score_from_kvec(gp_.kernel_vector(x), kernel_self(gp_.kernel()));
}

double NoisyEiScorer::score(const EncodedSequence& x) const {
  return score(Eigen::Map<const Eigen::VectorXd>(
      x.values.data(), static_cast<Eigen::Index>(x.values.size())));
}

std::vector<double> noisy_expected_improvement(
    const FittedGp& gp, const std::vector<EncodedSequence>& candidates,
    const AcquisitionSpec& spec, RngStream& rng) {
  spec.validate();
  if (candidates.empty()) {
    throw std::invalid_argument("noisy EI requires at least one candidate");
  }
  NoisyEiScorer scorer(gp, spec.mc_samples, rng);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(scorer.score(c));
  return scores;
}

std::vector<double> random_scores(std::size_t count, RngStream& rng) {
  if (count == 0) {
    throw std::invalid_argument("random_scores requires at least one candidate");
  }
  std::vector<double> scores(count);
  for (double& s : scores) s = rng.uniform();
  return scores;
}

std::size_t argmax_score(const std::vector<double>& scores) {
  if (scores.empty()) {
    throw std::invalid_argument("argmax_score on empty score list");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace seqbo
