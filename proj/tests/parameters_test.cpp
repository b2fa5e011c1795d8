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

#include "apir/parameters.hpp"

#include <set>

#include <gtest/gtest.h>

namespace apir {
namespace {

TEST(DeriveSystem, PaperInstance) {
  const auto p = derive_system(8, 2, 2, 2, 3);
  EXPECT_EQ(p.lambda, 3);
  EXPECT_EQ(p.P, 18);
  EXPECT_EQ(p.gamma, (std::vector<int>{6, 3, 9}));
  EXPECT_EQ(p.f, (std::vector<int>{6, 9, 18}));
}

TEST(DeriveSystem, DegenerateSingleLayer) {
  const auto p = derive_system(4, 2, 1, 1, 5);  // N == K+X+T
  EXPECT_EQ(p.lambda, 1);
  EXPECT_EQ(p.P, 1);
  EXPECT_EQ(p.gamma, (std::vector<int>{1}));
  EXPECT_EQ(p.f, (std::vector<int>{1}));
}

TEST(DeriveSystem, FourLayers) {
  const auto p = derive_system(9, 2, 2, 2, 1);
  EXPECT_EQ(p.lambda, 4);
  EXPECT_EQ(p.P, 48);
  EXPECT_EQ(p.gamma, (std::vector<int>{12, 4, 8, 24}));
  EXPECT_EQ(p.f, (std::vector<int>{12, 16, 24, 48}));
}

TEST(DeriveSystem, Guards) {
  EXPECT_THROW(derive_system(3, 2, 1, 1, 1), InsufficientServers);
  EXPECT_THROW(derive_system(4, 2, 1, 1, 0), ConfigError);
  EXPECT_THROW(derive_system(4, 0, 1, 1, 1), ConfigError);
}

TEST(DeriveSystem, GammaMonotoneConsistency) {
  for (int n = 3; n <= 12; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int x = 0; x < n - k; ++x) {
        for (int t = 1; n > k + x + t - 1 && t <= n; ++t) {
          const auto p = derive_system(n, k, x, t, 1);
          int sum = 0;
          for (int h = 0; h < p.lambda; ++h) {
            sum += p.gamma[h];
            EXPECT_EQ(p.f[h], sum);
            if (h > 0) EXPECT_GT(p.f[h], p.f[h - 1]);
          }
          EXPECT_EQ(p.f[p.lambda - 1], p.P);
        }
      }
    }
  }
}

TEST(FieldSize, Examples) {
  EXPECT_EQ(required_field_size(derive_system(8, 2, 2, 2, 1)), 11u);
  EXPECT_EQ(required_field_size(derive_system(4, 1, 1, 1, 1)), 6u);
  EXPECT_EQ(required_field_size(derive_system(5, 4, 0, 1, 1)), 9u);
}

TEST(SelectParameters, AppendixExample) {
  const auto p = derive_system(8, 2, 2, 2, 3);
  const auto enc = select_parameters(p, 11);
  ASSERT_EQ(enc.alphas.size(), 8u);
  for (int n = 0; n < 8; ++n) EXPECT_EQ(enc.alphas[n].value(), static_cast<std::uint64_t>(n));
  // beta data columns: (8,9,10) and its shift (9,10,8); noise columns reuse
  // alpha_0, alpha_1.
  const std::uint64_t expected[3][4] = {
      {8, 9, 0, 1}, {9, 10, 0, 1}, {10, 8, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(enc.betas.at(i, c).value(), expected[i][c]) << i << "," << c;
    }
  }
  EXPECT_TRUE(verify_constraints(enc, p).all());
}

TEST(SelectParameters, SmallestShape) {
  const auto p = derive_system(2, 1, 0, 1, 1);  // lambda = 1, K = 1, X = 0
  const auto enc = select_parameters(p, smallest_prime_at_least(required_field_size(p)));
  ASSERT_EQ(enc.betas.rows(), 1u);
  ASSERT_EQ(enc.betas.cols(), 1u);
  for (const auto& a : enc.alphas) EXPECT_NE(enc.betas.at(0, 0), a);
}

TEST(SelectParameters, WideFilesUseRowShifts) {
  const auto p = derive_system(6, 3, 0, 1, 1);  // K=3 > lambda=2
  const auto enc = select_parameters(p, smallest_prime_at_least(required_field_size(p)));
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(enc.betas.at(1, c), enc.betas.at(0, (c + 1) % 3));
  }
  EXPECT_TRUE(verify_constraints(enc, p).all());
}

TEST(SelectParameters, RejectsSmallField) {
  const auto p = derive_system(8, 2, 2, 2, 3);
  EXPECT_THROW(select_parameters(p, 7), FieldTooSmall);
}

TEST(VerifyConstraints, DetectsViolations) {
  const auto p = derive_system(8, 2, 2, 2, 3);
  auto enc = select_parameters(p, 11);

  auto dup_alpha = enc;
  dup_alpha.alphas[3] = dup_alpha.alphas[0];
  const auto rep1 = verify_constraints(dup_alpha, p);
  EXPECT_FALSE(rep1.p2);
  ASSERT_TRUE(rep1.p2_witness.has_value());
  EXPECT_EQ(*rep1.p2_witness, (std::pair<int, int>{0, 3}));

  auto beta_hits_alpha = enc;
  beta_hits_alpha.betas.at(0, 0) = beta_hits_alpha.alphas[0];
  EXPECT_FALSE(verify_constraints(beta_hits_alpha, p).p3);
}

TEST(SelectParameters, SweepPassesConstraints) {
  // Every admissible (N,K,X,T) with N <= 12 under the canonical prime.
  for (int n = 3; n <= 12; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int x = 0; x < n - k; ++x) {
        for (int t = 1; n > k + x + t - 1; ++t) {
          const auto p = derive_system(n, k, x, t, 1);
          const auto q = smallest_prime_at_least(required_field_size(p));
          const auto enc = select_parameters(p, q);
          const auto rep = verify_constraints(enc, p);
          EXPECT_TRUE(rep.all()) << "N=" << n << " K=" << k << " X=" << x
                                 << " T=" << t;
        }
      }
    }
  }
}

TEST(SelectParameters, BoundMatchesDistinctElementCount) {
  for (int n = 3; n <= 12; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int x = 0; x < n - k; ++x) {
        for (int t = 1; n > k + x + t - 1; ++t) {
          const auto p = derive_system(n, k, x, t, 1);
          const auto enc =
              select_parameters(p, smallest_prime_at_least(required_field_size(p)));
          std::set<std::uint64_t> used;
          for (const auto& a : enc.alphas) used.insert(a.value());
          for (std::size_t r = 0; r < enc.betas.rows(); ++r) {
            for (std::size_t c = 0; c < enc.betas.cols(); ++c) {
              used.insert(enc.betas.at(r, c).value());
            }
          }
          EXPECT_EQ(used.size(), required_field_size(p));
        }
      }
    }
  }
}

TEST(EncodingJson, RoundTrip) {
  const auto p = derive_system(8, 2, 2, 2, 3);
  const auto enc = select_parameters(p, 11);
  const auto back = encoding_from_json(encoding_to_json(enc));
  EXPECT_EQ(back.q, enc.q);
  EXPECT_EQ(back.alphas, enc.alphas);
  EXPECT_EQ(back.betas, enc.betas);
}

}  // namespace
}  // namespace apir
