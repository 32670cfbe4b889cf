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

#include "seqbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>

#include "seqbo/optim.hpp"

namespace seqbo {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-space bounds for the hyperparameter priors.
constexpr double kLenLo = -2.302585092994046;   // log 1e-1
constexpr double kLenHi = 4.605170185988092;    // log 1e2
constexpr double kScaleLo = -4.605170185988091; // log 1e-2
constexpr double kScaleHi = 4.605170185988092;  // log 1e2
constexpr double kNoiseLo = -13.815510557964274; // log 1e-6
constexpr double kNoiseHi = 2.302585092994046;   // log 10

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Parameter vector layout in log space: [lengthscale?] output-scale [noise?].
struct ParamLayout {
  bool has_lengthscale = false;
  bool has_noise = false;

  int size() const { return (has_lengthscale ? 1 : 0) + 1 + (has_noise ? 1 : 0); }
  int i_len() const { return 0; }
  int i_scale() const { return has_lengthscale ? 1 : 0; }
  int i_noise() const { return i_scale() + 1; }
};

struct LmlValue {
  double lml = kNegInf;
  double mean = 0.0;
};

// Marginal-likelihood engine for the tanimoto family.  The base Gram is
// hyperparameter-free, so one eigendecomposition makes every (scale, noise)
// evaluation O(n).
class SpectralEngine {
 public:
  SpectralEngine(const Eigen::MatrixXd& base_gram, const Eigen::VectorXd& y,
                 const ParamLayout& layout, double fixed_noise, double jitter)
      : layout_(layout), fixed_noise_(fixed_noise), jitter_(jitter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(base_gram);
    if (eig.info() != Eigen::Success) {
      throw std::runtime_error("gram eigendecomposition failed");
    }
    lambda_ = eig.eigenvalues();
    w_ = eig.eigenvectors().transpose() * y;
    u_ = eig.eigenvectors().transpose() *
         Eigen::VectorXd::Ones(y.size());
  }

  LmlValue eval(const Eigen::VectorXd& p, Eigen::VectorXd* grad) const {
    const double s2 = std::exp(p[layout_.i_scale()]);
    const double noise =
        layout_.has_noise ? std::exp(p[layout_.i_noise()]) : fixed_noise_;
    const double total = noise + jitter_;
    const Eigen::Index n = lambda_.size();

    Eigen::VectorXd d = (s2 * lambda_.array() + total).matrix();
    if ((d.array() <= 0.0).any()) return {};

    const Eigen::ArrayXd dinv = d.array().inverse();
    const double denom = (u_.array().square() * dinv).sum();
    const double mu = (u_.array() * w_.array() * dinv).sum() / denom;
    const Eigen::ArrayXd r = w_.array() - mu * u_.array();

    LmlValue out;
    out.mean = mu;
    out.lml = -0.5 * (r.square() * dinv).sum() -
              0.5 * d.array().log().sum() -
              0.5 * static_cast<double>(n) * kLog2Pi;

    if (grad != nullptr) {
      // d LML / d p = 0.5 * sum((r^2/d^2 - 1/d) * dd/dp); the profiled mean
      // contributes nothing at its optimum.
      const Eigen::ArrayXd core = r.square() * dinv.square() - dinv;
      grad->setZero(layout_.size());
      (*grad)[layout_.i_scale()] =
          0.5 * (core * (s2 * lambda_.array())).sum();
      if (layout_.has_noise) {
        (*grad)[layout_.i_noise()] = 0.5 * core.sum() * noise;
      }
    }
    return out;
  }

 private:
  ParamLayout layout_;
  double fixed_noise_;
  double jitter_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd w_;
  Eigen::VectorXd u_;
};

// Marginal-likelihood engine for stationary families: squared distances are
// cached, each evaluation rebuilds the Gram and factors it.
class StationaryEngine {
 public:
  StationaryEngine(const std::vector<Eigen::VectorXd>& inputs,
                   const Eigen::VectorXd& y, KernelFamily family,
                   const ParamLayout& layout, double fixed_noise,
                   double jitter)
      : y_(y),
        family_(family),
        layout_(layout),
        fixed_noise_(fixed_noise),
        jitter_(jitter) {
    const Eigen::Index n = y.size();
    r2_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      r2_(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double r2 = (inputs[i] - inputs[j]).squaredNorm();
        r2_(i, j) = r2;
        r2_(j, i) = r2;
      }
    }
  }

  LmlValue eval(const Eigen::VectorXd& p, Eigen::VectorXd* grad) const {
    const double len = std::exp(p[layout_.i_len()]);
    const double s2 = std::exp(p[layout_.i_scale()]);
    const double noise =
        layout_.has_noise ? std::exp(p[layout_.i_noise()]) : fixed_noise_;
    const double total = noise + jitter_;
    const Eigen::Index n = y_.size();

    Eigen::MatrixXd k_sig(n, n);
    if (family_ == KernelFamily::rbf) {
      k_sig = (s2 * (-0.5 / (len * len) * r2_.array()).exp()).matrix();
    } else {
      const double a = kSqrt3 / len;
      const Eigen::ArrayXXd ar = a * r2_.array().sqrt();
      k_sig = (s2 * (1.0 + ar) * (-ar).exp()).matrix();
    }
    Eigen::MatrixXd ky = k_sig;
    ky.diagonal().array() += total;

    Eigen::LLT<Eigen::MatrixXd> llt(ky);
    if (llt.info() != Eigen::Success) return {};

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd kinv_y = llt.solve(y_);
    const Eigen::VectorXd kinv_1 = llt.solve(ones);
    const double mu = ones.dot(kinv_y) / ones.dot(kinv_1);
    const Eigen::VectorXd alpha = kinv_y - mu * kinv_1;
    const Eigen::VectorXd resid = y_ - mu * ones;

    LmlValue out;
    out.mean = mu;
    out.lml = -0.5 * resid.dot(alpha) -
              llt.matrixL().toDenseMatrix().diagonal().array().log().sum() -
              0.5 * static_cast<double>(n) * kLog2Pi;

    if (grad != nullptr) {
      const Eigen::MatrixXd kinv =
          llt.solve(Eigen::MatrixXd::Identity(n, n));
      grad->setZero(layout_.size());
      // d LML / d p = 0.5 (alpha^T G alpha - tr(Kinv G)) for G = dKy/dp.
      auto grad_for = [&](const Eigen::MatrixXd& g) {
        return 0.5 * (alpha.dot(g * alpha) - kinv.cwiseProduct(g).sum());
      };
      Eigen::MatrixXd g_len(n, n);
      if (family_ == KernelFamily::rbf) {
        g_len = k_sig.cwiseProduct((r2_ / (len * len)));
      } else {
        const double a = kSqrt3 / len;
        g_len = (s2 * a * a * r2_.array() *
                 (-a * r2_.array().sqrt()).exp()).matrix();
      }
      (*grad)[layout_.i_len()] = grad_for(g_len);
      (*grad)[layout_.i_scale()] = grad_for(k_sig);
      if (layout_.has_noise) {
        Eigen::MatrixXd g_noise =
            noise * Eigen::MatrixXd::Identity(n, n);
        (*grad)[layout_.i_noise()] = grad_for(g_noise);
      }
    }
    return out;
  }

 private:
  Eigen::VectorXd y_;
  KernelFamily family_;
  ParamLayout layout_;
  double fixed_noise_;
  double jitter_;
  Eigen::MatrixXd r2_;
};

void validate_training_set(const std::vector<Eigen::VectorXd>& inputs,
                           const Eigen::VectorXd& targets) {
  if (inputs.empty()) {
    throw std::invalid_argument("gp fit requires at least one observation");
  }
  if (static_cast<Eigen::Index>(inputs.size()) != targets.size()) {
    throw std::invalid_argument("gp fit: input/target count mismatch");
  }
  for (const auto& x : inputs) {
    if (x.size() != inputs.front().size()) {
      throw std::invalid_argument("gp fit: inputs have differing dimensions");
    }
  }
  if (!targets.allFinite()) {
    throw std::invalid_argument("gp fit: targets must be finite");
  }
}

Eigen::MatrixXd build_kernel_matrix(const KernelSpec& spec,
                                    const std::vector<Eigen::VectorXd>& inputs) {
  const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel_self(spec);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = kernel_eval(spec, as_span(inputs[i]), as_span(inputs[j]));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace

LmlEval evaluate_lml(const std::vector<Eigen::VectorXd>& inputs,
                     const Eigen::VectorXd& targets, const KernelSpec& spec,
                     const GpConfig& cfg) {
  spec.validate();
  validate_training_set(inputs, targets);

  ParamLayout layout;
  layout.has_lengthscale = spec.is_stationary();
  layout.has_noise = cfg.noise_mode == NoiseMode::learned;

  Eigen::VectorXd p(layout.size());
  if (layout.has_lengthscale) p[layout.i_len()] = std::log(spec.lengthscale);
  p[layout.i_scale()] = std::log(spec.output_scale);
  if (layout.has_noise) p[layout.i_noise()] = std::log(cfg.noise_variance);

  LmlValue v;
  Eigen::VectorXd grad;
  if (spec.is_stationary()) {
    StationaryEngine engine(inputs, targets, spec.family, layout,
                            cfg.noise_variance, cfg.jitter);
    v = engine.eval(p, &grad);
  } else {
    SpectralEngine engine(build_kernel_matrix(KernelSpec::tanimoto(1.0),
                                              inputs),
                          targets, layout, cfg.noise_variance, cfg.jitter);
    v = engine.eval(p, &grad);
  }
  if (!std::isfinite(v.lml)) {
    throw std::runtime_error(
        "marginal likelihood undefined at the given parameters");
  }
  return LmlEval{v.lml, std::move(grad), v.mean};
}

std::size_t FittedGp::input_dim() const {
  return inputs_.empty() ? 0 : static_cast<std::size_t>(inputs_[0].size());
}

void FittedGp::finalize(const GpConfig& cfg) {
  const Eigen::Index n = targets_.size();
  k_train_ = build_kernel_matrix(spec_, inputs_);

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = cfg.jitter;
  for (;;) {
    Eigen::MatrixXd ky = k_train_;
    ky.diagonal().array() += noise_variance_ + jitter;
    llt.compute(ky);
    if (llt.info() == Eigen::Success) break;
    if (jitter >= cfg.jitter_cap) {
      throw std::runtime_error(
          "gp fit: Cholesky failed at jitter " + std::to_string(jitter) +
          " (kernel diagonal " + std::to_string(k_train_(0, 0)) +
          ", noise " + std::to_string(noise_variance_) +
          "); the kernel matrix is too ill-conditioned");
    }
    // A zero starting jitter would never escalate multiplicatively.
    jitter = jitter == 0.0 ? 1e-12 : std::min(jitter * 10.0, cfg.jitter_cap);
  }
  jitter_used_ = jitter;
  chol_ = llt.matrixL();

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd kinv_y = llt.solve(targets_);
  const Eigen::VectorXd kinv_1 = llt.solve(ones);
  if (std::isnan(mean_constant_)) {  // sentinel: profile the mean
    mean_constant_ = ones.dot(kinv_y) / ones.dot(kinv_1);
  }
  alpha_ = kinv_y - mean_constant_ * kinv_1;
  const Eigen::VectorXd resid = targets_ - mean_constant_ * ones;
  log_marginal_ = -0.5 * resid.dot(alpha_) -
                  chol_.diagonal().array().log().sum() -
                  0.5 * static_cast<double>(n) * kLog2Pi;
}

FittedGp FittedGp::fit(std::vector<Eigen::VectorXd> inputs,
                       Eigen::VectorXd targets, const KernelSpec& spec,
                       const GpConfig& cfg, RngStream& rng) {
  spec.validate();
  validate_training_set(inputs, targets);

  ParamLayout layout;
  layout.has_lengthscale = spec.is_stationary();
  layout.has_noise = cfg.noise_mode == NoiseMode::learned;

  const int dim = layout.size();
  Eigen::VectorXd lower(dim), upper(dim);
  if (layout.has_lengthscale) {
    lower[layout.i_len()] = kLenLo;
    upper[layout.i_len()] = kLenHi;
  }
  lower[layout.i_scale()] = kScaleLo;
  upper[layout.i_scale()] = kScaleHi;
  if (layout.has_noise) {
    lower[layout.i_noise()] = kNoiseLo;
    upper[layout.i_noise()] = kNoiseHi;
  }

  // Evaluation engine; the tanimoto Gram is parameter-free so it gets the
  // O(n) spectral path.
  std::unique_ptr<SpectralEngine> spectral;
  std::unique_ptr<StationaryEngine> stationary;
  if (spec.is_stationary()) {
    stationary = std::make_unique<StationaryEngine>(
        inputs, targets, spec.family, layout, cfg.noise_variance, cfg.jitter);
  } else {
    KernelSpec base = KernelSpec::tanimoto(1.0);
    spectral = std::make_unique<SpectralEngine>(
        build_kernel_matrix(base, inputs), targets, layout,
        cfg.noise_variance, cfg.jitter);
  }
  auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd* grad) {
    return spectral ? spectral->eval(p, grad) : stationary->eval(p, grad);
  };

  // Objective for the minimizer: negative marginal likelihood.
  GradObjective objective = [&](const Eigen::VectorXd& p,
                                Eigen::VectorXd& grad) {
    Eigen::VectorXd g;
    const LmlValue v = eval(p, &g);
    if (!std::isfinite(v.lml)) {
      grad.setZero(p.size());
      return std::numeric_limits<double>::infinity();
    }
    grad = -g;
    return -v.lml;
  };

  // Start points: the caller's spec, then log-uniform prior draws.
  std::vector<Eigen::VectorXd> starts;
  {
    Eigen::VectorXd p0(dim);
    if (layout.has_lengthscale) {
      p0[layout.i_len()] =
          std::clamp(std::log(spec.lengthscale), kLenLo, kLenHi);
    }
    p0[layout.i_scale()] =
        std::clamp(std::log(spec.output_scale), kScaleLo, kScaleHi);
    if (layout.has_noise) {
      p0[layout.i_noise()] =
          std::clamp(std::log(std::max(cfg.noise_variance, 1e-300)),
                     kNoiseLo, kNoiseHi);
    }
    starts.push_back(p0);
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
      p[i] = lower[i] + rng.uniform() * (upper[i] - lower[i]);
    }
    starts.push_back(p);
  }

  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_p;
  for (const auto& p0 : starts) {
    const LbfgsResult res = lbfgs_minimize(objective, p0, lower, upper);
    if (std::isfinite(res.value) && res.value < best_value) {
      best_value = res.value;
      best_p = res.x;
    }
  }
  if (!best_p.size()) {
    throw std::runtime_error(
        "gp fit: marginal likelihood undefined at every start; the kernel "
        "matrix could not be factorized");
  }

  FittedGp gp;
  gp.inputs_ = std::move(inputs);
  gp.targets_ = std::move(targets);
  gp.spec_ = spec;
  if (layout.has_lengthscale) {
    gp.spec_.lengthscale = std::exp(best_p[layout.i_len()]);
  }
  gp.spec_.output_scale = std::exp(best_p[layout.i_scale()]);
  gp.noise_variance_ = layout.has_noise ? std::exp(best_p[layout.i_noise()])
                                        : cfg.noise_variance;
  gp.mean_constant_ = std::numeric_limits<double>::quiet_NaN();  // profile
  gp.finalize(cfg);
  return gp;
}

FittedGp FittedGp::fit(const std::vector<EncodedSequence>& inputs,
                       const std::vector<double>& targets,
                       const KernelSpec& spec, const GpConfig& cfg,
                       RngStream& rng) {
  std::vector<Eigen::VectorXd> x;
  x.reserve(inputs.size());
  for (const auto& e : inputs) {
    x.push_back(Eigen::Map<const Eigen::VectorXd>(
        e.values.data(), static_cast<Eigen::Index>(e.values.size())));
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      targets.data(), static_cast<Eigen::Index>(targets.size()));
  return fit(std::move(x), std::move(y), spec, cfg, rng);
}

FittedGp FittedGp::with_parameters(std::vector<Eigen::VectorXd> inputs,
                                   Eigen::VectorXd targets,
                                   const KernelSpec& spec, const GpConfig& cfg,
                                   double mean_constant) {
  spec.validate();
  validate_training_set(inputs, targets);
  FittedGp gp;
  gp.inputs_ = std::move(inputs);
  gp.targets_ = std::move(targets);
  gp.spec_ = spec;
  gp.noise_variance_ = cfg.noise_variance;
  gp.mean_constant_ = mean_constant;
  gp.finalize(cfg);
  return gp;
}

FittedGp FittedGp::prior(const KernelSpec& spec, const GpConfig& cfg,
                         double mean_constant) {
  spec.validate();
  FittedGp gp;
  gp.spec_ = spec;
  gp.noise_variance_ = cfg.noise_variance;
  gp.mean_constant_ = mean_constant;
  gp.targets_ = Eigen::VectorXd();
  return gp;
}

Eigen::VectorXd FittedGp::kernel_vector(const Eigen::VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(input_dim())) {
    throw std::invalid_argument("gp predict: dimension mismatch: got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(input_dim()));
  }
  Eigen::VectorXd k(inputs_.size());
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    k[static_cast<Eigen::Index>(i)] =
        kernel_eval(spec_, as_span(inputs_[i]), as_span(x));
  }
  return k;
}

Prediction FittedGp::predict_from_kvec(const Eigen::VectorXd& kvec,
                                       double kself) const {
  if (kvec.size() != targets_.size()) {
    throw std::invalid_argument("gp predict: kernel vector length mismatch");
  }
  Prediction out;
  if (targets_.size() == 0) {
    out.mean = mean_constant_;
    out.variance = kself;
    return out;
  }
  out.mean = mean_constant_ + kvec.dot(alpha_);
  const Eigen::VectorXd v =
      chol_.triangularView<Eigen::Lower>().solve(kvec);
  out.variance = std::max(0.0, kself - v.squaredNorm());
  return out;
}

Prediction FittedGp::predict(const Eigen::VectorXd& x) const {
  if (targets_.size() == 0) {
    return Prediction{mean_constant_, kernel_self(spec_)};
  }
  return predict_from_kvec(kernel_vector(x), kernel_self(spec_));
}

Prediction FittedGp::predict(const EncodedSequence& x) const {
  return predict(Eigen::Map<const Eigen::VectorXd>(
      x.values.data(), static_cast<Eigen::Index>(x.values.size())));
}

double FittedGp::log_marginal_likelihood() const {
  if (targets_.size() == 0) {
    throw std::logic_error("log marginal likelihood needs observations");
  }
  return log_marginal_;
}

}  // namespace seqbo
