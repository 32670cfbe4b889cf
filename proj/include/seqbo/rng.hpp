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

#include <cstdint>
#include <string_view>

namespace seqbo {

// Deterministic random stream with labeled substream derivation. Streams
// derived with the same (seed, label) pair produce identical output on every
// platform; the generator never consults std:: distribution objects.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  // Derives an independent stream keyed by this stream's seed and the label.
  RngStream derive(std::string_view label) const;

  // Raw 64-bit output.
  std::uint64_t next_u64();
  // Low 32 bits of the next 64-bit output.
  std::uint32_t next_u32();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi].  Unbiased via rejection sampling; requires lo <= hi.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  // Standard normal via inverse-CDF transform of uniform().
  double normal();

  // Seed value after label mixing; used to key derived streams.
  std::uint64_t stream_seed() const { return stream_seed_; }

 private:
  explicit RngStream(std::uint64_t mixed_seed);

  std::uint64_t stream_seed_;
  std::uint64_t state_[4];
};

// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view data);

// SplitMix64 step; used for seeding and for hashing integers.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace seqbo
