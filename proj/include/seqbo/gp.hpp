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

#include <Eigen/Dense>
#include <vector>

#include "seqbo/encoders.hpp"
#include "seqbo/kernels.hpp"
#include "seqbo/rng.hpp"

namespace seqbo {

enum class NoiseMode { fixed, learned };

struct GpConfig {
  double noise_variance = 1e-4;
  NoiseMode noise_mode = NoiseMode::fixed;
  // Base jitter; fitting escalates it by factors of 10 up to jitter_cap
  // before giving up on the Cholesky.
  double jitter = 1e-8;
  double jitter_cap = 1e-3;
  int restarts = 5;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  // latent (noise-free) posterior variance
};

// Marginal likelihood and its analytic gradient at fixed parameters, for
// gradient verification and external tuning.  The gradient is taken in
// log-parameter space with layout [lengthscale (stationary only)],
// [output scale], [noise (learned mode only)]; the mean constant is profiled
// out at the evaluation point.
struct LmlEval {
  double lml = 0.0;
  Eigen::VectorXd gradient;
  double mean_constant = 0.0;
};

LmlEval evaluate_lml(const std::vector<Eigen::VectorXd>& inputs,
                     const Eigen::VectorXd& targets, const KernelSpec& spec,
                     const GpConfig& cfg);

// Gaussian-process posterior with a profiled constant mean.  Immutable after
// construction; prediction methods are pure and thread-safe.
class FittedGp {
 public:
  // Maximizes the log marginal likelihood over kernel hyperparameters in
  // log space (multi-start), profiling out the mean constant.  The spec
  // argument provides one deterministic starting point; the remaining
  // restarts draw from log-uniform priors using rng.
  static FittedGp fit(std::vector<Eigen::VectorXd> inputs,
                      Eigen::VectorXd targets, const KernelSpec& spec,
                      const GpConfig& cfg, RngStream& rng);
  static FittedGp fit(const std::vector<EncodedSequence>& inputs,
                      const std::vector<double>& targets,
                      const KernelSpec& spec, const GpConfig& cfg,
                      RngStream& rng);

  // Builds the posterior at exactly the given parameters and mean constant,
  // skipping optimization.
  static FittedGp with_parameters(std::vector<Eigen::VectorXd> inputs,
                                  Eigen::VectorXd targets,
                                  const KernelSpec& spec, const GpConfig& cfg,
                                  double mean_constant);

  // Prior model with no observations: predicts (mean_constant, output scale).
  static FittedGp prior(const KernelSpec& spec, const GpConfig& cfg,
                        double mean_constant = 0.0);

  std::size_t size() const { return inputs_.size(); }
  std::size_t input_dim() const;
  const std::vector<Eigen::VectorXd>& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  const KernelSpec& kernel() const { return spec_; }
  double noise_variance() const { return noise_variance_; }
  double jitter_used() const { return jitter_used_; }
  double mean_constant() const { return mean_constant_; }

  Prediction predict(const Eigen::VectorXd& x) const;
  Prediction predict(const EncodedSequence& x) const;

  // Prediction from a precomputed cross-kernel vector k(x_i, x*) and the
  // self-kernel k(x*, x*); lets pool loops reuse cached dot products.
  Prediction predict_from_kvec(const Eigen::VectorXd& kvec,
                               double kself) const;

  // Log marginal likelihood of the training targets at the fitted
  // parameters (prior mean = mean constant).
  double log_marginal_likelihood() const;

  // Cross-kernel vector k(x_i, x*) over the training inputs.
  Eigen::VectorXd kernel_vector(const Eigen::VectorXd& x) const;

  // Internals consumed by the joint-posterior sampler.
  const Eigen::MatrixXd& cholesky_lower() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  // Prior covariance of the latent function at the training inputs (no
  // noise, no jitter).
  const Eigen::MatrixXd& prior_train_covariance() const { return k_train_; }

 private:
  FittedGp() = default;

  void finalize(const GpConfig& cfg);

  std::vector<Eigen::VectorXd> inputs_;
  Eigen::VectorXd targets_;
  KernelSpec spec_;
  double noise_variance_ = 1e-4;
  double jitter_used_ = 0.0;
  double mean_constant_ = 0.0;
  double log_marginal_ = 0.0;
  Eigen::MatrixXd k_train_;  // kernel matrix without noise
  Eigen::MatrixXd chol_;     // lower Cholesky of k_train_ + (noise+jitter) I
  Eigen::VectorXd alpha_;    // (K_y)^{-1} (y - mean)
};

}  // namespace seqbo
