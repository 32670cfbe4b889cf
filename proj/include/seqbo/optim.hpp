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
#include <functional>

namespace seqbo {

// Objective returning f(x) and writing the gradient.  A non-finite return
// marks x as infeasible; the line search backs away from it.
using GradObjective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int max_iterations = 60;
  int history = 8;
  double gradient_tolerance = 1e-7;
  double value_tolerance = 1e-12;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

// Minimizes f over the box [lower, upper] by projected L-BFGS with Armijo
// backtracking.  The curvature history is reset whenever the active bound
// set changes, so stale pairs never poison the direction.
LbfgsResult lbfgs_minimize(const GradObjective& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper,
                           const LbfgsOptions& options = {});

}  // namespace seqbo
