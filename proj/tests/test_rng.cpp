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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seqbo/rng.hpp"
#include "seqbo/sobol.hpp"
#include "seqbo/stats.hpp"

TEST_CASE("same seed and label reproduce the stream") {
  seqbo::RngStream a(42, "trial:0");
  seqbo::RngStream b(42, "trial:0");
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different labels give different streams") {
  seqbo::RngStream a(42, "trial:0");
  seqbo::RngStream b(42, "trial:1");
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("derive is const and order-independent") {
  seqbo::RngStream parent(7, "root");
  seqbo::RngStream d1 = parent.derive("child");
  // Advancing the parent must not change later derivations.
  (void)parent.next_u64();
  (void)parent.next_u64();
  seqbo::RngStream d2 = parent.derive("child");
  for (int i = 0; i < 20; ++i) CHECK(d1.next_u64() == d2.next_u64());

  seqbo::RngStream other = parent.derive("other");
  CHECK(other.stream_seed() != d2.stream_seed());
}

TEST_CASE("uniform lies in the half-open unit interval") {
  seqbo::RngStream rng(1, "uniform");
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("uniform_int respects bounds and is near-uniform") {
  seqbo::RngStream rng(9, "uniform-int");
  std::array<int, 7> counts{};
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.uniform_int(3, 9);
    REQUIRE(v >= 3);
    REQUIRE(v <= 9);
    ++counts[v - 3];
  }
  // Expected 10000 per bucket; 4 sigma of binomial(70000, 1/7) is ~380.
  for (int c : counts) CHECK(std::abs(c - 10000) < 400);

  CHECK(rng.uniform_int(5, 5) == 5);
}

TEST_CASE("normal draws have standard moments") {
  seqbo::RngStream rng(4, "normal");
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("normal cdf and inverse round-trip") {
  for (double p : {1e-8, 1e-4, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
    const double x = seqbo::inverse_normal_cdf(p);
    CHECK(seqbo::normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(seqbo::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(seqbo::normal_pdf(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  // Deep tails stay accurate (erfc-based, no cancellation).
  CHECK(seqbo::normal_cdf(-8.0) == doctest::Approx(6.22096e-16).epsilon(1e-3));
}

TEST_CASE("fnv1a64 matches known vectors") {
  // Reference values of the 64-bit FNV-1a algorithm.
  CHECK(seqbo::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(seqbo::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(seqbo::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("sobol points are deterministic and stratified") {
  seqbo::RngStream rng(11, "sobol");
  seqbo::SobolSampler s1(3, rng);
  seqbo::RngStream rng2(11, "sobol");
  seqbo::SobolSampler s2(3, rng2);

  const int n = 1 << 10;
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto p = s1.next();
    auto q = s2.next();
    REQUIRE(p.size() == 3);
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(p[d] == q[d]);
      CHECK(p[d] >= 0.0);
      CHECK(p[d] < 1.0);
    }
    pts.push_back(std::move(p));
  }

  // A scrambled (t,m,s)-net fills every length-1/16 bin of each axis with
  // exactly n/16 points.
  for (std::size_t d = 0; d < 3; ++d) {
    std::array<int, 16> bins{};
    for (const auto& p : pts) ++bins[static_cast<int>(p[d] * 16.0)];
    for (int b : bins) CHECK(b == n / 16);
  }
}

TEST_CASE("sobol dimensions are independent across seeds") {
  seqbo::RngStream ra(1, "sobol-a");
  seqbo::RngStream rb(2, "sobol-b");
  seqbo::SobolSampler sa(2, ra);
  seqbo::SobolSampler sb(2, rb);
  int identical = 0;
  for (int i = 0; i < 64; ++i) {
    if (sa.next() == sb.next()) ++identical;
  }
  CHECK(identical == 0);
}

TEST_CASE("sobol supports the qmc acquisition dimension budget") {
  seqbo::RngStream rng(3, "sobol-wide");
  CHECK(seqbo::detail::kSobolMaxDims >= 640);
  seqbo::SobolSampler s(640, rng);
  auto p = s.next();
  CHECK(p.size() == 640);
}
