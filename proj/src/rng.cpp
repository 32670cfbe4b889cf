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

#include "seqbo/rng.hpp"

#include <stdexcept>

#include "seqbo/stats.hpp"

namespace seqbo {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t mixed_seed) : stream_seed_(mixed_seed) {
  std::uint64_t sm = mixed_seed;
  for (auto& word : state_) word = splitmix64(sm);
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : RngStream(seed ^ fnv1a64(label)) {}

RngStream RngStream::derive(std::string_view label) const {
  return RngStream(stream_seed_, label);
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256** by Blackman and Vigna.
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint32_t RngStream::next_u32() {
  return static_cast<std::uint32_t>(next_u64());
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t range = hi - lo;
  if (range == ~0ull) return next_u64();
  const std::uint64_t bound = range + 1;
  // Rejection sampling over the largest multiple of bound below 2^64.
  const std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw > limit);
  return lo + draw % bound;
}

double RngStream::normal() {
  // uniform() lands in [0, 1); nudge 0 to the smallest representable
  // positive draw so the inverse CDF stays finite.
  double u = uniform();
  if (u == 0.0) u = 0x1.0p-53;
  return inverse_normal_cdf(u);
}

}  // namespace seqbo
