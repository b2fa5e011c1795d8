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

#include <set>

#include <gtest/gtest.h>

namespace apir {
namespace {

constexpr int kStar = -1;

// Compares against a fixture given as subarray matrices with -1 for stars.
void expect_matches(const QueryArray& arr,
                    const std::vector<std::vector<std::vector<int>>>& fixture) {
  ASSERT_EQ(static_cast<int>(fixture.size()), arr.layers());
  for (int h = 0; h < arr.layers(); ++h) {
    ASSERT_EQ(static_cast<int>(fixture[h].size()), arr.lambda());
    for (int i = 0; i < arr.lambda(); ++i) {
      ASSERT_EQ(static_cast<int>(fixture[h][i].size()), arr.columns(h));
      for (int j = 0; j < arr.columns(h); ++j) {
        const Cell& cell = arr.at(i, h, j);
        if (fixture[h][i][j] == kStar) {
          EXPECT_FALSE(cell.has_value()) << "U^" << h << "[" << i << "][" << j << "]";
        } else {
          ASSERT_TRUE(cell.has_value()) << "U^" << h << "[" << i << "][" << j << "]";
          EXPECT_EQ(*cell, fixture[h][i][j])
              << "U^" << h << "[" << i << "][" << j << "]";
        }
      }
    }
  }
}

TEST(Build, LambdaOne) {
  const auto arr = QueryArray::build(1);
  EXPECT_EQ(arr.p(), 1);
  ASSERT_TRUE(arr.at(0, 0).has_value());
  EXPECT_EQ(*arr.at(0, 0), 0);
  EXPECT_TRUE(verify_conditions(arr).all());
}

TEST(Build, LambdaTwo) {
  const auto arr = QueryArray::build(2);
  expect_matches(arr, {
                          {{0, 2}, {1, 3}},
                          {{kStar, 0}, {3, kStar}},
                      });
}

TEST(Build, LambdaThreeMatchesPaperArray) {
  const auto arr = QueryArray::build(3);
  EXPECT_EQ(arr.p(), 18);
  expect_matches(
      arr,
      {
          {{0, 3, 6, 9, 12, 15}, {1, 4, 7, 10, 13, 16}, {2, 5, 8, 11, 14, 17}},
          {{kStar, 0, 9}, {4, kStar, 13}, {8, 17, kStar}},
          {{kStar, kStar, 3, kStar, kStar, 12, kStar, kStar, 0},
           {7, kStar, kStar, 16, kStar, kStar, 13, kStar, kStar},
           {kStar, 2, kStar, kStar, 11, kStar, kStar, 8, kStar}},
      });
}

TEST(Build, LambdaFourMatchesPaperArray) {
  const auto arr = QueryArray::build(4);
  EXPECT_EQ(arr.p(), 48);
  expect_matches(
      arr,
      {
          {{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44},
           {1, 5, 9, 13, 17, 21, 25, 29, 33, 37, 41, 45},
           {2, 6, 10, 14, 18, 22, 26, 30, 34, 38, 42, 46},
           {3, 7, 11, 15, 19, 23, 27, 31, 35, 39, 43, 47}},
          {{kStar, 0, 16, 32}, {5, kStar, 21, 37}, {10, 26, kStar, 42},
           {15, 31, 47, kStar}},
          {{kStar, kStar, 4, 20, kStar, kStar, 36, 0},
           {9, kStar, kStar, 25, 41, kStar, kStar, 21},
           {14, 30, kStar, kStar, 46, 42, kStar, kStar},
           {kStar, 3, 19, kStar, kStar, 35, 15, kStar}},
          {{kStar, kStar, kStar, 8, kStar, kStar, kStar, 24, kStar, kStar,
            kStar, 40, kStar, kStar, kStar, 16, kStar, kStar, kStar, 4, kStar,
            kStar, kStar, 36},
           {13, kStar, kStar, kStar, 29, kStar, kStar, kStar, 45, kStar, kStar,
            kStar, 37, kStar, kStar, kStar, 25, kStar, kStar, kStar, 21, kStar,
            kStar, kStar},
           {kStar, 2, kStar, kStar, kStar, 18, kStar, kStar, kStar, 34, kStar,
            kStar, kStar, 10, kStar, kStar, kStar, 14, kStar, kStar, kStar, 46,
            kStar, kStar},
           {kStar, kStar, 7, kStar, kStar, kStar, 23, kStar, kStar, kStar, 39,
            kStar, kStar, kStar, 31, kStar, kStar, kStar, 3, kStar, kStar,
            kStar, 35, kStar}},
      });
}

TEST(Conditions, HoldForLambdaUpToSix) {
  for (int lambda = 1; lambda <= 6; ++lambda) {
    const auto arr = QueryArray::build(lambda);
    const auto rep = verify_conditions(arr);
    EXPECT_TRUE(rep.all()) << "lambda=" << lambda;
  }
}

TEST(Conditions, DetectRuinedColumn) {
  auto arr = QueryArray::build(3);
  arr.mutable_at(0, 0) = std::nullopt;  // swap an integer in U^0 for a star
  const auto rep = verify_conditions(arr);
  EXPECT_FALSE(rep.c1);
  EXPECT_FALSE(rep.c2);
  ASSERT_TRUE(rep.c1_witness.has_value());
  EXPECT_EQ(*rep.c1_witness, (std::pair<int, int>{0, 0}));
  EXPECT_THROW(column_specs(arr), ConditionsViolated);
}

TEST(Invariants, RowResidueAndStarPattern) {
  for (int lambda = 1; lambda <= 6; ++lambda) {
    const auto arr = QueryArray::build(lambda);
    for (int h = 0; h < lambda; ++h) {
      for (int j = 0; j < arr.columns(h); ++j) {
        for (int i = 0; i < lambda; ++i) {
          const Cell& cell = arr.at(i, h, j);
          // Stars sit exactly at rows (j)_l .. (j-h+1)_l of column j.
          const bool star_expected = ((j - i) % lambda + lambda) % lambda < h;
          EXPECT_EQ(cell.has_value(), !star_expected);
          if (cell.has_value()) {
            EXPECT_EQ(*cell % lambda, i);  // integer cells match their row
          }
        }
      }
    }
  }
}

TEST(Invariants, Determinism) {
  EXPECT_TRUE(QueryArray::build(4) == QueryArray::build(4));
}

TEST(Invariants, LayerValuesComeFromEarlierLayers) {
  for (int lambda = 2; lambda <= 6; ++lambda) {
    const auto arr = QueryArray::build(lambda);
    std::set<int> seen;
    for (int h = 0; h < lambda; ++h) {
      std::set<int> layer_values;
      for (int j = 0; j < arr.columns(h); ++j) {
        for (int i = 0; i < lambda; ++i) {
          const Cell& cell = arr.at(i, h, j);
          if (cell.has_value()) layer_values.insert(*cell);
        }
      }
      if (h == 0) {
        seen = layer_values;
        continue;
      }
      for (int v : layer_values) EXPECT_TRUE(seen.count(v)) << "layer " << h;
      seen.insert(layer_values.begin(), layer_values.end());
    }
  }
}

TEST(ColumnSpecs, CompensationWitnesses) {
  const auto arr2 = QueryArray::build(2);
  const auto specs2 = column_specs(arr2);
  EXPECT_EQ(specs2[0].rows, (std::vector<int>{0, 1}));
  EXPECT_EQ(specs2[0].compensation, (std::vector<int>{0}));

  const auto arr3 = QueryArray::build(3);
  const auto specs3 = column_specs(arr3);
  EXPECT_EQ(specs3[0].rows, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(specs3[0].residues, (std::vector<int>{0, 1, 2}));
  ASSERT_EQ(specs3[0].compensation.size(), 2u);

  // a_{r-h-1} must reappear among the integer cells of layer r.
  for (int lambda = 2; lambda <= 6; ++lambda) {
    const auto arr = QueryArray::build(lambda);
    const auto specs = column_specs(arr);
    std::vector<std::set<int>> unions(lambda);
    for (const auto& spec : specs) {
      for (int v : spec.rows) unions[spec.h].insert(v);
    }
    for (const auto& spec : specs) {
      ASSERT_EQ(static_cast<int>(spec.compensation.size()),
                spec.h < lambda - 1 ? lambda - spec.h - 1 : 0);
      for (std::size_t e = 0; e < spec.compensation.size(); ++e) {
        const int layer = spec.h + 1 + static_cast<int>(e);
        EXPECT_TRUE(unions[layer].count(spec.compensation[e]))
            << "lambda=" << lambda << " h=" << spec.h << " j=" << spec.j;
      }
    }
  }
}

TEST(ColumnSpecs, BottomLayerHasNoCompensation) {
  const auto arr = QueryArray::build(4);
  for (const auto& spec : column_specs(arr)) {
    if (spec.h == 3) EXPECT_TRUE(spec.compensation.empty());
  }
}

TEST(Render, PrettyLambdaTwo) {
  const auto arr = QueryArray::build(2);
  EXPECT_EQ(to_pretty(arr), " 0 2 | * 0\n 1 3 | 3 *\n");
}

TEST(Render, JsonHasNullStars) {
  const auto arr = QueryArray::build(2);
  const std::string json = to_json(arr);
  EXPECT_NE(json.find("null"), std::string::npos);
  EXPECT_NE(json.find("\"lambda\":2"), std::string::npos);
}

}  // namespace
}  // namespace apir
