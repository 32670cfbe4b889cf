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
#include <span>
#include <string_view>

namespace seqbo::vecops {

/// Vector arithmetic backends. `scalar` is the portable reference
/// implementation; the SIMD variants are compiled per-architecture and
/// selected at runtime when the CPU supports them.
enum class Backend { scalar, avx2, neon };

Backend active_backend();
bool backend_available(Backend b);
std::string_view backend_name(Backend b);

/// Force a specific backend (equivalence tests, benchmarking). Throws
/// std::invalid_argument if the backend is unavailable on this machine.
void force_backend(Backend b);

/// Revert to the auto-detected backend.
void reset_backend();

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace seqbo::vecops
