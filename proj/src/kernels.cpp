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

#include "seqbo/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "seqbo/vecops.hpp"

namespace seqbo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

}  // namespace

const char* kernel_family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::tanimoto:
      return "tanimoto";
    case KernelFamily::rbf:
      return "rbf";
    case KernelFamily::matern32:
      return "matern32";
  }
  throw std::logic_error("unknown kernel family");
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "tanimoto") return KernelFamily::tanimoto;
  if (name == "rbf") return KernelFamily::rbf;
  if (name == "matern32") return KernelFamily::matern32;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

KernelSpec KernelSpec::tanimoto(double output_scale) {
  return KernelSpec{KernelFamily::tanimoto, 0.0, output_scale};
}

KernelSpec KernelSpec::rbf(double lengthscale, double output_scale) {
  return KernelSpec{KernelFamily::rbf, lengthscale, output_scale};
}

KernelSpec KernelSpec::matern32(double lengthscale, double output_scale) {
  return KernelSpec{KernelFamily::matern32, lengthscale, output_scale};
}

void KernelSpec::validate() const {
  if (!(output_scale > 0.0) || !std::isfinite(output_scale)) {
    throw std::invalid_argument("kernel output scale must be positive");
  }
  if (family == KernelFamily::tanimoto) {
    if (lengthscale != 0.0) {
      throw std::invalid_argument("tanimoto kernel has no lengthscale");
    }
    return;
  }
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw std::invalid_argument("kernel lengthscale must be positive");
  }
}

double kernel_from_products(const KernelSpec& spec, double dot, double sq_x,
                            double sq_y) {
  switch (spec.family) {
    case KernelFamily::tanimoto: {
      const double denom = sq_x + sq_y - dot;
      if (denom <= 0.0) return spec.output_scale;  // both vectors are zero
      return spec.output_scale * dot / denom;
    }
    case KernelFamily::rbf: {
      const double r2 = std::max(0.0, sq_x + sq_y - 2.0 * dot);
      return spec.output_scale *
             std::exp(-0.5 * r2 / (spec.lengthscale * spec.lengthscale));
    }
    case KernelFamily::matern32: {
      const double r2 = std::max(0.0, sq_x + sq_y - 2.0 * dot);
      const double t = kSqrt3 * std::sqrt(r2) / spec.lengthscale;
      return spec.output_scale * (1.0 + t) * std::exp(-t);
    }
  }
  throw std::logic_error("unknown kernel family");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch: " +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  }
  switch (spec.family) {
    case KernelFamily::tanimoto:
      return kernel_from_products(spec, vecops::dot(x, y),
                                  vecops::squared_norm(x),
                                  vecops::squared_norm(y));
    case KernelFamily::rbf: {
      const double r2 = vecops::squared_distance(x, y);
      return spec.output_scale *
             std::exp(-0.5 * r2 / (spec.lengthscale * spec.lengthscale));
    }
    case KernelFamily::matern32: {
      const double r2 = vecops::squared_distance(x, y);
      const double t = kSqrt3 * std::sqrt(r2) / spec.lengthscale;
      return spec.output_scale * (1.0 + t) * std::exp(-t);
    }
  }
  throw std::logic_error("unknown kernel family");
}

double kernel_eval(const KernelSpec& spec, const EncodedSequence& x,
                   const EncodedSequence& y) {
  return kernel_eval(spec, std::span<const double>(x.values),
                     std::span<const double>(y.values));
}

double kernel_self(const KernelSpec& spec) { return spec.output_scale; }

}  // namespace seqbo
