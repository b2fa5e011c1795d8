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

// The lambda x P query array: one subarray per layer, columns naming the
// file rows each query targets. Conditions C0-C3 make the layered
// straggler compensation of the decoder possible.

#ifndef APIR_QUERY_ARRAY_HPP_
#define APIR_QUERY_ARRAY_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apir/parameters.hpp"

namespace apir {

// A cell is either a row index in [0, P) or the filler symbol "*".
using Cell = std::optional<int>;

class QueryArray {
 public:
  // Runs the deterministic construction for the given layer count.
  static QueryArray build(int lambda);

  int lambda() const { return lambda_; }
  int p() const { return p_; }
  int layers() const { return lambda_; }
  int columns(int h) const { return gamma_[h]; }
  const std::vector<int>& gamma() const { return gamma_; }

  // Global column of the j-th column of subarray h.
  int global_column(int h, int j) const { return offsets_[h] + j; }
  // Inverse mapping: global column -> (h, j).
  std::pair<int, int> locate(int global_col) const;

  const Cell& at(int row, int global_col) const {
    return cells_[row * p_ + global_col];
  }
  const Cell& at(int row, int h, int j) const {
    return at(row, global_column(h, j));
  }
  Cell& mutable_at(int row, int global_col) {
    return cells_[row * p_ + global_col];
  }

  friend bool operator==(const QueryArray& a, const QueryArray& b) {
    return a.lambda_ == b.lambda_ && a.cells_ == b.cells_;
  }

 private:
  QueryArray(int lambda, int p, std::vector<int> gamma);

  int lambda_;
  int p_;
  std::vector<int> gamma_;
  std::vector<int> offsets_;
  std::vector<Cell> cells_;  // lambda x P, row-major
};

struct ConditionReport {
  bool c0 = false;
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  // First failing (h, j) column per condition, when applicable.
  std::optional<std::pair<int, int>> c0_witness;
  std::optional<std::pair<int, int>> c1_witness;
  std::optional<int> c2_missing;  // a row index not covered by U^0
  std::optional<std::pair<int, int>> c3_witness;

  bool all() const { return c0 && c1 && c2 && c3; }
};

// Checks C0-C3 directly against the array contents. C3 is verified by an
// existence search (injective assignment of column elements to the later
// layers), independent of how the array was built.
ConditionReport verify_conditions(const QueryArray& arr);

struct ColumnSpec {
  int h = 0;
  int j = 0;
  std::vector<int> rows;          // R^h_j, ascending
  std::vector<int> residues;      // the same rows mod lambda, ascending
  std::vector<int> compensation;  // D^h_j ordered: element for layer h+1+idx
};

// Per-column retrieval sets plus the constructive compensation witness
// D^h_j = { u^h_{(j-r+1)_lambda, j} : r in [h+1, lambda) }.
// Throws ConditionsViolated if the array fails verify_conditions.
std::vector<ColumnSpec> column_specs(const QueryArray& arr);

// Paper-style layout with '*' for stars and '|' between subarrays.
std::string to_pretty(const QueryArray& arr);

// {"lambda":..,"P":..,"gamma":[..],"cells":[[..]]} with null for stars.
std::string to_json(const QueryArray& arr);

}  // namespace apir

#endif  // APIR_QUERY_ARRAY_HPP_
