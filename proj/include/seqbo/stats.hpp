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

namespace seqbo {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF, accurate in both tails (erfc-based).
double normal_cdf(double x);

// Inverse of normal_cdf on (0, 1).  Rational initial guess polished with
// two Newton steps; round-trips through normal_cdf to ~1e-13.
double inverse_normal_cdf(double p);

}  // namespace seqbo
