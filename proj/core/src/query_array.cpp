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

#include "apir/query_array.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace apir {

namespace {
int mod(int a, int m) { return ((a % m) + m) % m; }
}  // namespace

QueryArray::QueryArray(int lambda, int p, std::vector<int> gamma)
    : lambda_(lambda), p_(p), gamma_(std::move(gamma)) {
  offsets_.resize(lambda_ + 1, 0);
  for (int h = 0; h < lambda_; ++h) offsets_[h + 1] = offsets_[h] + gamma_[h];
  cells_.assign(static_cast<std::size_t>(lambda_) * p_, std::nullopt);
}

std::pair<int, int> QueryArray::locate(int global_col) const {
  for (int h = lambda_ - 1; h >= 0; --h) {
    if (global_col >= offsets_[h]) return {h, global_col - offsets_[h]};
  }
  throw BadIndex("column out of range");
}

QueryArray QueryArray::build(int lambda) {
  if (lambda < 1) throw ConfigError("lambda must be positive");
  std::int64_t lcm = 1;
  for (int i = 2; i <= lambda; ++i) lcm = std::lcm<std::int64_t>(lcm, i);
  const int p = static_cast<int>(lambda * lcm);
  std::vector<int> gamma(lambda);
  gamma[0] = p / lambda;
  for (int h = 1; h < lambda; ++h) gamma[h] = p / ((lambda - h) * (lambda - h + 1));

  QueryArray arr(lambda, p, gamma);
  for (int i = 0; i < lambda; ++i) {
    for (int j = 0; j < gamma[0]; ++j) arr.mutable_at(i, j) = i + j * lambda;
  }
  for (int h = 1; h < lambda; ++h) {
    const int base = arr.offsets_[h];
    for (int i = 0; i < lambda; ++i) {
      // Values come from this row's cells at column phase (i+h-1) mod lambda
      // in the already-built prefix of the array; each earlier subarray width
      // is a multiple of lambda, so the phase is the same globally.
      int next_source = mod(i + h - 1, lambda);
      for (int j = 0; j < gamma[h]; ++j) {
        if (mod(j - i, lambda) < h) continue;  // star cell
        arr.mutable_at(i, base + j) = *arr.at(i, next_source);
        next_source += lambda;
      }
    }
  }
  return arr;
}

namespace {

std::vector<int> column_rows(const QueryArray& arr, int h, int j) {
  std::vector<int> rows;
  for (int i = 0; i < arr.lambda(); ++i) {
    const Cell& c = arr.at(i, h, j);
    if (c.has_value()) rows.push_back(*c);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<std::set<int>> layer_unions(const QueryArray& arr) {
  std::vector<std::set<int>> unions(arr.lambda());
  for (int h = 0; h < arr.lambda(); ++h) {
    for (int j = 0; j < arr.columns(h); ++j) {
      for (int v : column_rows(arr, h, j)) unions[h].insert(v);
    }
  }
  return unions;
}

// Can the integer elements of column (h, j) be injectively assigned so that
// layer r in [h+1, lambda) receives an element present in union(R^r)?
bool c3_matchable(const std::vector<int>& rows,
                  const std::vector<std::set<int>>& unions, int h,
                  int lambda) {
  const int slots = lambda - h - 1;
  std::vector<int> used(rows.size(), 0);
  // Depth-first matching over the small slot count (slots < lambda <= ~6).
  std::function<bool(int)> assign = [&](int slot) -> bool {
    if (slot == slots) return true;
    const int layer = h + 1 + slot;
    for (std::size_t e = 0; e < rows.size(); ++e) {
      if (used[e] || unions[layer].count(rows[e]) == 0) continue;
      used[e] = 1;
      if (assign(slot + 1)) return true;
      used[e] = 0;
    }
    return false;
  };
  return assign(0);
}

}  // namespace

ConditionReport verify_conditions(const QueryArray& arr) {
  ConditionReport rep;
  const int lambda = arr.lambda();

  rep.c0 = true;
  for (int h = 0; h < lambda && rep.c0; ++h) {
    for (int j = 0; j < arr.columns(h) && rep.c0; ++j) {
      for (int i = 0; i < lambda; ++i) {
        const Cell& c = arr.at(i, h, j);
        if (c.has_value() && (*c < 0 || *c >= arr.p())) {
          rep.c0 = false;
          rep.c0_witness = {h, j};
          break;
        }
      }
    }
  }

  rep.c1 = true;
  for (int h = 0; h < lambda && rep.c1; ++h) {
    for (int j = 0; j < arr.columns(h); ++j) {
      const auto rows = column_rows(arr, h, j);
      std::set<int> residues;
      for (int v : rows) residues.insert(mod(v, lambda));
      if (static_cast<int>(rows.size()) != lambda - h ||
          static_cast<int>(residues.size()) != lambda - h) {
        rep.c1 = false;
        rep.c1_witness = {h, j};
        break;
      }
    }
  }

  std::set<int> covered;
  for (int j = 0; j < arr.columns(0); ++j) {
    for (int v : column_rows(arr, 0, j)) covered.insert(v);
  }
  rep.c2 = static_cast<int>(covered.size()) == arr.p();
  if (!rep.c2) {
    for (int v = 0; v < arr.p(); ++v) {
      if (covered.count(v) == 0) {
        rep.c2_missing = v;
        break;
      }
    }
  }

  rep.c3 = true;
  const auto unions = layer_unions(arr);
  for (int h = 0; h < lambda - 1 && rep.c3; ++h) {
    for (int j = 0; j < arr.columns(h); ++j) {
      if (!c3_matchable(column_rows(arr, h, j), unions, h, lambda)) {
        rep.c3 = false;
        rep.c3_witness = {h, j};
        break;
      }
    }
  }
  return rep;
}

std::vector<ColumnSpec> column_specs(const QueryArray& arr) {
  const ConditionReport rep = verify_conditions(arr);
  if (!rep.all()) {
    throw ConditionsViolated("query array fails C0-C3");
  }
  const int lambda = arr.lambda();
  const auto unions = layer_unions(arr);
  std::vector<ColumnSpec> specs;
  specs.reserve(arr.p());
  for (int h = 0; h < lambda; ++h) {
    for (int j = 0; j < arr.columns(h); ++j) {
      ColumnSpec spec;
      spec.h = h;
      spec.j = j;
      spec.rows = column_rows(arr, h, j);
      for (int v : spec.rows) spec.residues.push_back(mod(v, lambda));
      std::sort(spec.residues.begin(), spec.residues.end());
      for (int r = h + 1; r < lambda; ++r) {
        const Cell& c = arr.at(mod(j - r + 1, lambda), h, j);
        if (!c.has_value()) {
          throw ConditionsViolated("compensation witness hit a star cell");
        }
        if (unions[r].count(*c) == 0) {
          throw ConditionsViolated("compensation witness " +
                                   std::to_string(*c) +
                                   " absent from layer " + std::to_string(r));
        }
        spec.compensation.push_back(*c);
      }
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

std::string to_pretty(const QueryArray& arr) {
  int width = 1;
  for (int v = arr.p() - 1; v >= 10; v /= 10) ++width;
  std::ostringstream out;
  for (int i = 0; i < arr.lambda(); ++i) {
    for (int h = 0; h < arr.lambda(); ++h) {
      if (h > 0) out << " |";
      for (int j = 0; j < arr.columns(h); ++j) {
        const Cell& c = arr.at(i, h, j);
        out << ' ';
        std::string s = c.has_value() ? std::to_string(*c) : "*";
        out << std::string(width - s.size(), ' ') << s;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const QueryArray& arr) {
  nlohmann::json j;
  j["lambda"] = arr.lambda();
  j["P"] = arr.p();
  j["gamma"] = arr.gamma();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < arr.lambda(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < arr.p(); ++c) {
      const Cell& cell = arr.at(i, c);
      if (cell.has_value()) {
        row.push_back(*cell);
      } else {
        row.push_back(nullptr);
      }
    }
    rows.push_back(row);
  }
  j["cells"] = rows;
  return j.dump();
}

}  // namespace apir
