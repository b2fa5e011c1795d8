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

// System quantities derived from (N, K, X, T, M) and the encoding
// parameters {alpha_n, beta_{i,k}} together with their distinctness
// constraints P0-P3.

#ifndef APIR_PARAMETERS_HPP_
#define APIR_PARAMETERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apir/field.hpp"

namespace apir {

struct SystemParams {
  int N = 0;  // servers
  int K = 0;  // storage rate parameter
  int X = 0;  // storage security threshold
  int T = 1;  // query privacy threshold
  int M = 1;  // files

  int lambda = 0;          // N - (K+X+T-1): layers, max stragglers + 1
  int P = 0;               // lambda * lcm(1..lambda): rows per file
  std::vector<int> gamma;  // columns per query subarray
  std::vector<int> f;      // f[S]: responses per fast server with S stragglers
};

// Populates the derived quantities. Throws InsufficientServers when
// N <= K+X+T-1 and ConfigError on other out-of-range inputs.
SystemParams derive_system(int n, int k, int x, int t, int m);

// Exact field-size bound N + max{K, lambda}; any prime >= this works.
std::uint64_t required_field_size(const SystemParams& params);

struct EncodingParameters {
  std::uint64_t q = 0;
  std::vector<FieldElement> alphas;  // N server evaluation points
  FieldMatrix betas;                 // lambda x (K+X) interpolation grid
};

// Canonical choice of encoding parameters over GF(q): alphas are 0..N-1,
// the X noise columns reuse alpha_0..alpha_{X-1}, and the K data columns
// are cyclic shifts of max{K, lambda} fresh elements. Satisfies P0-P3.
// Throws FieldTooSmall when q < required_field_size.
EncodingParameters select_parameters(const SystemParams& params,
                                     std::uint64_t q);

struct ConstraintReport {
  bool p0 = false;  // rows of beta pairwise distinct
  bool p1 = false;  // first K columns of beta pairwise distinct
  bool p2 = false;  // alphas pairwise distinct
  bool p3 = false;  // alphas disjoint from first K beta columns
  // First offending index pair per violated constraint, if any.
  std::optional<std::pair<int, int>> p0_witness;
  std::optional<std::pair<int, int>> p1_witness;
  std::optional<std::pair<int, int>> p2_witness;
  std::optional<std::pair<int, int>> p3_witness;

  bool all() const { return p0 && p1 && p2 && p3; }
};

ConstraintReport verify_constraints(const EncodingParameters& enc,
                                    const SystemParams& params);

// JSON document {"q": .., "alphas": [..], "betas": [[..]]} for fixtures.
std::string encoding_to_json(const EncodingParameters& enc);
EncodingParameters encoding_from_json(const std::string& text);

}  // namespace apir

#endif  // APIR_PARAMETERS_HPP_
