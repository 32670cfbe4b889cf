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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace seqbo {

class RngStream;

namespace detail {
extern const std::size_t kSobolMaxDims;
extern const std::uint32_t kSobolDirections[][32];
}  // namespace detail

// Scrambled Sobol sequence: per-dimension linear matrix scramble plus a
// random digital shift, both drawn from the provided stream.  Points are
// emitted in Gray-code order, so successive next() calls flip one direction
// vector per dimension.
class SobolSampler {
 public:
  SobolSampler(std::size_t dim, RngStream& rng);

  std::size_t dim() const { return dim_; }

  // Next point in [0, 1)^dim.
  std::vector<double> next();

 private:
  std::size_t dim_;
  std::uint64_t index_;
  std::vector<std::uint32_t> state_;              // dim entries
  std::vector<std::uint32_t> scrambled_dirs_;     // dim x 32, row-major
};

}  // namespace seqbo
