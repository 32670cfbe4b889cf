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

#include "seqbo/vecops.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "vecops_detail.hpp"

namespace seqbo::vecops {

namespace detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static constexpr KernelTable table{dot_scalar, squared_norm_scalar,
                                     squared_distance_scalar, axpy_scalar};
  return table;
}

}  // namespace detail

namespace {

const detail::KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(SEQBO_HAVE_AVX2)
      if (detail::avx2_supported()) return &detail::avx2_table();
#endif
      return nullptr;
    case Backend::neon:
#if defined(SEQBO_HAVE_NEON)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend detect_backend() {
#if defined(SEQBO_HAVE_AVX2)
  if (detail::avx2_supported()) return Backend::avx2;
#endif
#if defined(SEQBO_HAVE_NEON)
  return Backend::neon;
#endif
  return Backend::scalar;
}

struct Dispatch {
  std::atomic<const detail::KernelTable*> table;
  std::atomic<Backend> backend;
  Dispatch() : table(table_for(detect_backend())), backend(detect_backend()) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

const detail::KernelTable& table() {
  return *dispatch().table.load(std::memory_order_acquire);
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("vecops: size mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Backend active_backend() { return dispatch().backend.load(std::memory_order_acquire); }

bool backend_available(Backend b) { return table_for(b) != nullptr; }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

void force_backend(Backend b) {
  const detail::KernelTable* t = table_for(b);
  if (t == nullptr) {
    throw std::invalid_argument("vecops: backend unavailable: " +
                                std::string(backend_name(b)));
  }
  dispatch().table.store(t, std::memory_order_release);
  dispatch().backend.store(b, std::memory_order_release);
}

void reset_backend() { force_backend(detect_backend()); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return table().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return table().squared_norm(a.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return table().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  table().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace seqbo::vecops
