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

#include "seqbo/sobol.hpp"

#include <bit>
#include <stdexcept>

#include "seqbo/rng.hpp"

namespace seqbo {

namespace {

// Applies one row of a lower-triangular scramble matrix: output bit i (MSB
// first) is the GF(2) inner product of the row with the direction number.
std::uint32_t scramble_direction(const std::uint32_t rows[32], std::uint32_t v) {
  std::uint32_t out = 0;
  for (int i = 0; i < 32; ++i) {
    if (std::popcount(rows[i] & v) & 1u) out |= 1u << (31 - i);
  }
  return out;
}

}  // namespace

SobolSampler::SobolSampler(std::size_t dim, RngStream& rng)
    : dim_(dim), index_(0) {
  if (dim == 0 || dim > detail::kSobolMaxDims) {
    throw std::invalid_argument("SobolSampler: dimension out of range");
  }
  state_.resize(dim);
  scrambled_dirs_.resize(dim * 32);
  std::uint32_t rows[32];
  for (std::size_t d = 0; d < dim; ++d) {
    // Lower-triangular matrix with unit diagonal: row i has its diagonal bit
    // fixed and random bits strictly above it in MSB ordering.
    for (int i = 0; i < 32; ++i) {
      const std::uint32_t mask = i == 0 ? 0u : 0xFFFFFFFFu << (32 - i);
      rows[i] = (rng.next_u32() & mask) | (1u << (31 - i));
    }
    for (int k = 0; k < 32; ++k) {
      scrambled_dirs_[d * 32 + k] =
          scramble_direction(rows, detail::kSobolDirections[d][k]);
    }
    state_[d] = rng.next_u32();  // digital shift
  }
}

std::vector<double> SobolSampler::next() {
  std::vector<double> point(dim_);
  for (std::size_t d = 0; d < dim_; ++d) {
    point[d] = (static_cast<double>(state_[d]) + 0.5) * 0x1.0p-32;
  }
  ++index_;
  const int flip = std::countr_zero(index_);
  if (flip >= 32) throw std::runtime_error("SobolSampler: sequence exhausted");
  for (std::size_t d = 0; d < dim_; ++d) {
    state_[d] ^= scrambled_dirs_[d * 32 + flip];
  }
  return point;
}

}  // namespace seqbo
