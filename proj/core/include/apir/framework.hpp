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

// The feasible PIR coding framework: storage basis functions b_{i,k}(x),
// query basis functions v^{(R)}_{i,k,t}(x), a partial-file decoder, and a
// certifier for the four feasibility conditions. Two interchangeable
// realizations are provided: Lagrange interpolation codes and
// cross-subspace-alignment (CSA) codes.

#ifndef APIR_FRAMEWORK_HPP_
#define APIR_FRAMEWORK_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "apir/parameters.hpp"

namespace apir {

enum class FrameworkKind { kLagrange, kCsa };

std::string framework_name(FrameworkKind kind);
FrameworkKind framework_from_name(const std::string& name);

// Immutable bundle of encoding parameters plus basis evaluation. Values at
// the server points alpha_n are precomputed; arbitrary-x evaluation is also
// available for tests and certifiers. Safe for concurrent use.
class BasisSet {
 public:
  BasisSet(FrameworkKind kind, EncodingParameters enc, SystemParams params);

  FrameworkKind kind() const { return kind_; }
  const SystemParams& params() const { return params_; }
  const EncodingParameters& encoding() const { return enc_; }
  const Field& field() const { return field_; }
  FieldElement alpha(int n) const { return enc_.alphas[n]; }
  FieldElement beta(int i, int k) const { return enc_.betas.at(i, k); }

  // b_{i,k}(x) for i in [0, lambda), k in [0, K+X).
  FieldElement storage_basis(int i, int k, FieldElement x) const;

  // v^{(R)}_{i,k,t}(x) for i in R, k in [0, K), t in [0, T]; the index
  // t == T selects the desired-file term. R holds framework rows, sorted.
  FieldElement query_basis(const std::vector<int>& r_set, int i, int k, int t,
                           FieldElement x) const;

  // Evaluations at x = alpha_n, precomputed where possible.
  FieldElement storage_at(int i, int k, int n) const;
  FieldElement query_at(const std::vector<int>& r_set, int i, int k, int t,
                        int n) const;

 private:
  FrameworkKind kind_;
  EncodingParameters enc_;
  SystemParams params_;
  Field field_;
  std::vector<FieldElement> storage_table_;
  // One table per nonempty subset of [0, lambda), keyed by bitmask;
  // entry layout [idx(i)][k][t][n].
  std::vector<std::vector<FieldElement>> query_tables_;
};

struct PartialFileRequest {
  int theta = 0;
  std::vector<int> rows;  // R: nonempty subset of [0, lambda), ascending
};

// Recovers the r x K partial file from per-server sub-responses plus d
// already-known rows. Any K+X+T-1+r-d responses suffice; with fewer
// the call throws InsufficientResponses rather than guessing. Rows listed
// in known_rows are returned verbatim.
FieldMatrix decode_partial(
    const BasisSet& basis, const PartialFileRequest& req,
    const std::map<int, std::vector<FieldElement>>& responses,
    const std::map<int, std::vector<FieldElement>>& known_rows);

// --- framework-level protocol steps (lambda x K files), used by the
// certifier and by tests; the adaptive scheme builds on the same basis.

// shares[n] is M x lambda: f~_i^{(m)}(alpha_n). Noise is drawn per
// (m, i, noise column) from noise_seed.
std::vector<FieldMatrix> framework_encode(const BasisSet& basis,
                                          const std::vector<FieldMatrix>& files,
                                          std::uint64_t noise_seed);

// queries[n][ (m * r + idx) * K + k ] = q~^{(m,R)}_{i,k}(alpha_n) with
// idx the position of i in the sorted R.
std::vector<std::vector<FieldElement>> framework_queries(
    const BasisSet& basis, const std::vector<int>& r_set, int theta,
    std::uint64_t noise_seed);

// answers[n][k] = sum_m sum_{i in R} q~ * f~ at alpha_n.
std::vector<std::vector<FieldElement>> framework_answers(
    const BasisSet& basis, const std::vector<int>& r_set,
    const std::vector<FieldMatrix>& shares,
    const std::vector<std::vector<FieldElement>>& queries);

struct FrameworkCertificate {
  bool f0 = false;  // every (K+X)-subset storage matrix nonsingular
  bool f1 = false;  // every X-subset and T-subset matrix nonsingular
  bool f2 = false;  // partial file decodable from N-(lambda-r) responses
  bool f3 = false;  // ... from N-(lambda-r+d) responses plus d known rows
  std::string witness;  // empty when all conditions hold

  bool all() const { return f0 && f1 && f2 && f3; }
};

// Certifies the four conditions. Subset enumeration is exhaustive; the
// decode checks run `trials` file draws (the all-zero file plus trials-1
// random ones) per (R, d). Throws EnumerationTooLarge if any of
// C(N,K+X), C(N,X), C(N,T) exceeds 10^6.
FrameworkCertificate certify_framework(const BasisSet& basis, int trials,
                                       std::uint64_t seed);

std::string certificate_to_json(const FrameworkCertificate& cert);

}  // namespace apir

#endif  // APIR_FRAMEWORK_HPP_
