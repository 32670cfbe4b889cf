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

#include "seqbo/optim.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

namespace seqbo {

namespace {

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

// Gradient with components pointing out of the box zeroed.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower,
                                   const Eigen::VectorXd& upper) {
  Eigen::VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0)) {
      pg[i] = 0.0;
    }
  }
  return pg;
}

std::uint64_t active_set_bits(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper) {
  std::uint64_t bits = 0;
  for (Eigen::Index i = 0; i < x.size() && i < 64; ++i) {
    if (x[i] <= lower[i]) bits |= 1ull << (2 * (i % 32));
    if (x[i] >= upper[i]) bits |= 2ull << (2 * (i % 32));
  }
  return bits;
}

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop_direction(const std::deque<Pair>& history,
                                   const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  if (!history.empty()) {
    const Pair& last = history.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const GradObjective& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper,
                           const LbfgsOptions& options) {
  if (x0.size() != lower.size() || x0.size() != upper.size()) {
    throw std::invalid_argument("lbfgs_minimize: bound dimension mismatch");
  }
  if ((lower.array() > upper.array()).any()) {
    throw std::invalid_argument("lbfgs_minimize: lower bound exceeds upper");
  }

  LbfgsResult result;
  result.x = clamp_to_box(x0, lower, upper);
  Eigen::VectorXd grad(x0.size());
  result.value = f(result.x, grad);
  if (!std::isfinite(result.value)) return result;

  std::deque<Pair> history;
  std::uint64_t active = active_set_bits(result.x, lower, upper);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    const Eigen::VectorXd pg = projected_gradient(result.x, grad, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) break;

    Eigen::VectorXd dir = two_loop_direction(history, grad);
    if (!dir.allFinite() || dir.dot(grad) >= 0.0) dir = -grad;

    // Projected Armijo backtracking.
    const double c1 = 1e-4;
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new, g_new(x0.size());
    double f_new = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = clamp_to_box(result.x + step * dir, lower, upper);
      const Eigen::VectorXd delta = x_new - result.x;
      if (delta.lpNorm<Eigen::Infinity>() == 0.0) break;
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) &&
          f_new <= result.value + c1 * grad.dot(delta)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = x_new - result.x;
    const Eigen::VectorXd y = g_new - grad;
    const std::uint64_t active_new = active_set_bits(x_new, lower, upper);
    if (active_new != active) {
      history.clear();
      active = active_new;
    } else {
      const double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        history.push_back({s, y, 1.0 / sy});
        if (static_cast<int>(history.size()) > options.history) {
          history.pop_front();
        }
      }
    }

    const bool converged =
        std::abs(result.value - f_new) <
        options.value_tolerance * (1.0 + std::abs(result.value));
    result.x = x_new;
    result.value = f_new;
    grad = g_new;
    if (converged) break;
  }
  return result;
}

}  // namespace seqbo
