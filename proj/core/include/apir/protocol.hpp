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

// The full adaptive PIR scheme: secure storage encoding over P file rows,
// per-column private queries, ordered server answers, the layered
// adaptive decoder, rate accounting, and the secrecy/privacy audits.

#ifndef APIR_PROTOCOL_HPP_
#define APIR_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apir/framework.hpp"
#include "apir/query_array.hpp"
#include "apir/rational.hpp"

namespace apir {

// M files, each a P x K matrix over GF(q).
struct Dataset {
  std::vector<FieldMatrix> files;
};

Dataset random_dataset(const SystemParams& params, const Field& f,
                       std::uint64_t file_seed);

// Share held by one server: values.at(m, i) = f_i^{(m)}(alpha_n).
struct StorageShare {
  int server = 0;
  FieldMatrix values;  // M x P
};

// Row i of every file is encoded with framework row (i mod lambda); the X
// noise symbols per (m, i) are drawn from noise_seed.
std::vector<StorageShare> encode_storage(const BasisSet& basis,
                                         const Dataset& data,
                                         std::uint64_t noise_seed);

// Query values for one column of the query array at one server.
// values[(m * r + idx) * K + k] = q_{rows[idx],k}^{(m,R)}(alpha_n).
struct ColumnQuery {
  int h = 0;
  int j = 0;
  std::vector<int> rows;  // R^h_j ascending
  std::vector<FieldElement> values;
};

// Everything one server receives: P column queries in layer-major order.
struct QueryBundle {
  int server = 0;
  std::vector<ColumnQuery> columns;
};

std::vector<QueryBundle> make_queries(const BasisSet& basis,
                                      const QueryArray& arr, int theta,
                                      std::uint64_t noise_seed);

// One response: the K sub-responses of one column query.
struct ResponseBundle {
  int server = 0;
  int h = 0;
  int j = 0;
  std::vector<FieldElement> sub;
};

// Computes all P responses for one server, in the order they are sent
// (layer-major, then column).
std::vector<ResponseBundle> server_answer(const StorageShare& share,
                                          const QueryBundle& bundle);

// Single-consumer state machine over the response stream. push() enforces
// each server's sending order; once some straggler count S has its
// threshold met (at least N-S servers have delivered layers 0..S), decode()
// runs the layered recovery: layer S with no side rows, layer h < S with
// the S-h compensation rows named by D^h_j and already recovered in deeper
// layers.
class AdaptiveDecoder {
 public:
  AdaptiveDecoder(const BasisSet& basis, const QueryArray& arr, int theta);

  void push(const ResponseBundle& resp);

  // Smallest S in [0, lambda) whose threshold is met, if any.
  std::optional<int> ready() const;

  // Requires ready(); returns the decoded P x K file.
  FieldMatrix decode();

  int consumed_total() const { return consumed_total_; }
  const std::vector<int>& consumed_per_server() const { return consumed_; }
  // Fewest responses held by any single column of layers 0..S.
  int min_column_responses(int s) const;

 private:
  const BasisSet& basis_;
  const QueryArray& arr_;
  int theta_;
  std::vector<ColumnSpec> specs_;           // layer-major
  std::vector<int> consumed_;               // per server
  int consumed_total_ = 0;
  // responses_[column][server]: K sub-responses, empty if missing.
  std::vector<std::vector<std::vector<FieldElement>>> responses_;
};

struct DecodeResult {
  bool need_more = true;
  int committed_s = -1;
  FieldMatrix file;
};

// Feeds the stream in order until a threshold is met, then decodes.
// Returns need_more when the stream ends below every threshold.
DecodeResult adaptive_decode(const BasisSet& basis, const QueryArray& arr,
                             int theta,
                             const std::vector<ResponseBundle>& stream);

// Exact accounting with S stragglers: download cost D_S = (N-S) * K * F_S
// field elements and rate R_S = P*K / D_S = 1 - (K+X+T-1)/(N-S).
struct RateCost {
  Rational download_cost;
  Rational rate;
};
RateCost rate_and_cost(const SystemParams& params, int s);

enum class SubsetMode { kAll, kSample };

struct SecrecyReport {
  bool matrices_ok = false;
  std::string witness;
  bool empirical_run = false;
  double min_p = 1.0;
  int groups = 0;
  bool pass = false;
};

// Verifies every X-subset noise matrix B_{i,X} is nonsingular (the secret
// sharing precondition) and, when draws > 0 and X > 0, chi-squares the
// joint X-subset share view over fresh-noise redraws against uniform.
SecrecyReport check_secrecy(const BasisSet& basis, SubsetMode mode,
                            int draws, std::uint64_t seed);

struct PrivacyReport {
  bool matrices_ok = false;
  std::string witness;
  bool empirical_run = false;
  double min_p = 1.0;
  int coordinates = 0;
  bool pass = false;
};

// Verifies every T-subset query-noise matrix over the array's columns is
// nonsingular and, when draws > 0 and M >= 2, runs a two-sample chi-square
// per query-view coordinate between theta=0 and theta=1.
PrivacyReport check_privacy(const BasisSet& basis, const QueryArray& arr,
                            SubsetMode mode, int draws, std::uint64_t seed);

}  // namespace apir

#endif  // APIR_PROTOCOL_HPP_
