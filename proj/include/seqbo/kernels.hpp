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

#include <span>
#include <string>

#include "seqbo/encoders.hpp"

namespace seqbo {

enum class KernelFamily { tanimoto, rbf, matern32 };

const char* kernel_family_name(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

// Kernel hyperparameters.  Stationary families (rbf, matern32) carry a
// lengthscale; tanimoto has none and its lengthscale must stay at the
// sentinel value 0.
struct KernelSpec {
  KernelFamily family = KernelFamily::tanimoto;
  double lengthscale = 0.0;
  double output_scale = 1.0;

  static KernelSpec tanimoto(double output_scale = 1.0);
  static KernelSpec rbf(double lengthscale, double output_scale = 1.0);
  static KernelSpec matern32(double lengthscale, double output_scale = 1.0);

  bool is_stationary() const { return family != KernelFamily::tanimoto; }

  // Throws std::invalid_argument on non-positive parameters or a tanimoto
  // spec carrying a lengthscale.
  void validate() const;
};

// k(x, y).  Dimension mismatch is an error.  Tanimoto of two zero vectors
// is defined as output_scale (identical inputs).
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);
double kernel_eval(const KernelSpec& spec, const EncodedSequence& x,
                   const EncodedSequence& y);

// k(x, y) from cached products: dot = <x,y>, sq_x = |x|^2, sq_y = |y|^2.
// Lets pool loops reuse incremental dot-product tables.
double kernel_from_products(const KernelSpec& spec, double dot, double sq_x,
                            double sq_y);

// k(x, x), which is output_scale for every family (tanimoto included, by
// the zero-vector convention above).
double kernel_self(const KernelSpec& spec);

}  // namespace seqbo
