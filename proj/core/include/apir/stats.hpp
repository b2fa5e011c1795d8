/*
 * Copyright 2026 the adaptive-pir authors
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

#ifndef APIR_STATS_HPP_
#define APIR_STATS_HPP_

#include <cstdint>
#include <vector>

namespace apir {

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution: P[X >= stat].
double chi_square_sf(double stat, double dof);

// Pearson goodness-of-fit p-value of `counts` against the uniform
// distribution over its bins.
double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts);

// Two-sample chi-square p-value for equal-sized samples a and b binned
// identically. Bins empty in both samples are dropped.
double chi_square_two_sample_pvalue(const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b);

}  // namespace apir

#endif  // APIR_STATS_HPP_
