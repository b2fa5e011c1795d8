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

#include "apir/framework.hpp"

#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "apir/rng.hpp"

namespace apir {
namespace {

BasisSet appendix_basis(FrameworkKind kind) {
  const auto params = derive_system(8, 2, 2, 2, 3);
  return BasisSet(kind, select_parameters(params, 11), params);
}

std::vector<FieldMatrix> random_files(const SystemParams& p, const Field& f,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FieldMatrix> files(p.M, FieldMatrix(p.lambda, p.K, f));
  for (auto& w : files) {
    for (int i = 0; i < p.lambda; ++i) {
      for (int k = 0; k < p.K; ++k) w.at(i, k) = f(rng.below(f.q()));
    }
  }
  return files;
}

Poly poly_mul(const Poly& a, const Poly& b, const Field& f) {
  Poly out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = out[i + j] + a[i] * b[j];
    }
  }
  return out;
}

TEST(LagrangeBasis, KroneckerAtNodes) {
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 4; ++k) {
      for (int kk = 0; kk < 4; ++kk) {
        const auto v = basis.storage_basis(i, k, basis.beta(i, kk));
        EXPECT_EQ(v.value(), k == kk ? 1u : 0u);
      }
    }
  }
}

TEST(LagrangeBasis, PartitionOfUnity) {
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  const Field& f = basis.field();
  for (std::uint64_t x = 0; x < 11; ++x) {
    for (int i = 0; i < 3; ++i) {
      FieldElement sum = f.zero();
      for (int k = 0; k < 4; ++k) sum = sum + basis.storage_basis(i, k, f(x));
      EXPECT_EQ(sum.value(), 1u) << "x=" << x << " i=" << i;
    }
  }
}

TEST(CsaBasis, ConstantNoiseTermAndPole) {
  const auto basis = appendix_basis(FrameworkKind::kCsa);
  const Field& f = basis.field();
  for (std::uint64_t x = 0; x < 11; ++x) {
    EXPECT_EQ(basis.storage_basis(0, 2, f(x)).value(), 1u);  // x^0
    EXPECT_EQ(basis.storage_basis(0, 3, f(x)), f(x));        // x^1
  }
  EXPECT_THROW(basis.storage_basis(0, 0, basis.beta(0, 0)), PoleHit);
}

TEST(CsaBasis, NoiseTermsVanishAtDataPoints) {
  const auto basis = appendix_basis(FrameworkKind::kCsa);
  const std::vector<int> r_set{0, 1, 2};
  for (int i : r_set) {
    for (int k = 0; k < 2; ++k) {
      for (int t = 0; t < 2; ++t) {
        for (int kk = 0; kk < 2; ++kk) {
          EXPECT_TRUE(
              basis.query_basis(r_set, i, k, t, basis.beta(i, kk)).is_zero());
        }
      }
    }
  }
}

TEST(LagrangeQueryBasis, NodeProperties) {
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  const std::vector<int> r_set{0, 2};
  for (int i : r_set) {
    for (int k = 0; k < 2; ++k) {
      // Desired term: 1 at own data node, 0 at the other rows' nodes and at
      // the noise nodes alpha_0..alpha_{T-1}.
      for (int j : r_set) {
        const auto v = basis.query_basis(r_set, i, k, 2, basis.beta(j, k));
        EXPECT_EQ(v.value(), i == j ? 1u : 0u);
      }
      for (int t = 0; t < 2; ++t) {
        EXPECT_TRUE(basis.query_basis(r_set, i, k, 2, basis.alpha(t)).is_zero());
      }
      // Noise terms: Kronecker on the alpha grid, 0 on the data nodes.
      for (int t = 0; t < 2; ++t) {
        for (int tt = 0; tt < 2; ++tt) {
          const auto v = basis.query_basis(r_set, i, k, t, basis.alpha(tt));
          EXPECT_EQ(v.value(), t == tt ? 1u : 0u);
        }
        for (int j : r_set) {
          EXPECT_TRUE(
              basis.query_basis(r_set, i, k, t, basis.beta(j, k)).is_zero());
        }
      }
    }
  }
}

TEST(QueryBasis, RejectsBadIndices) {
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  const Field& f = basis.field();
  EXPECT_THROW(basis.query_basis({0, 1}, 2, 0, 0, f(5)), BadIndex);
  EXPECT_THROW(basis.query_basis({0, 1}, 0, 0, 3, f(5)), BadIndex);
  EXPECT_THROW(basis.storage_basis(3, 0, f(5)), BadIndex);
}

TEST(DecodePartial, AppendixExampleFullRank) {
  // r=3, d=0: the answer polynomial has degree 4+r, so all 8 responses are
  // exactly enough.
  for (auto kind : {FrameworkKind::kLagrange, FrameworkKind::kCsa}) {
    const auto basis = appendix_basis(kind);
    const auto& p = basis.params();
    const auto files = random_files(p, basis.field(), 21);
    const std::vector<int> r_set{0, 1, 2};
    const int theta = 1;
    const auto shares = framework_encode(basis, files, 33);
    const auto queries = framework_queries(basis, r_set, theta, 44);
    const auto answers = framework_answers(basis, r_set, shares, queries);
    std::map<int, std::vector<FieldElement>> responses;
    for (int n = 0; n < 8; ++n) responses[n] = answers[n];
    const auto got = decode_partial(basis, {theta, r_set}, responses, {});
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 2; ++k) EXPECT_EQ(got.at(i, k), files[theta].at(i, k));
    }
  }
}

TEST(DecodePartial, ZeroFileDecodesToZero) {
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  const auto& p = basis.params();
  const std::vector<FieldMatrix> files(p.M,
                                       FieldMatrix(p.lambda, p.K, basis.field()));
  const std::vector<int> r_set{0, 1};
  const auto shares = framework_encode(basis, files, 5);
  const auto queries = framework_queries(basis, r_set, 0, 6);
  const auto answers = framework_answers(basis, r_set, shares, queries);
  std::map<int, std::vector<FieldElement>> responses;
  for (int n = 0; n < 7; ++n) responses[n] = answers[n];
  const auto got = decode_partial(basis, {0, r_set}, responses, {});
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_TRUE(got.at(i, k).is_zero());
  }
}

TEST(DecodePartial, SideRowsReduceResponseCount) {
  // r=2, d=1: N-(lambda-r+d) = 6 responses plus one known row.
  for (auto kind : {FrameworkKind::kLagrange, FrameworkKind::kCsa}) {
    const auto basis = appendix_basis(kind);
    const auto& p = basis.params();
    const auto files = random_files(p, basis.field(), 77);
    const std::vector<int> r_set{1, 2};
    const int theta = 2;
    const auto shares = framework_encode(basis, files, 88);
    const auto queries = framework_queries(basis, r_set, theta, 99);
    const auto answers = framework_answers(basis, r_set, shares, queries);
    std::map<int, std::vector<FieldElement>> responses;
    for (int n = 2; n < 8; ++n) responses[n] = answers[n];
    std::map<int, std::vector<FieldElement>> known;
    known[2] = {files[theta].at(2, 0), files[theta].at(2, 1)};
    const auto got = decode_partial(basis, {theta, r_set}, responses, known);
    for (int idx = 0; idx < 2; ++idx) {
      for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(got.at(idx, k), files[theta].at(r_set[idx], k));
      }
    }
  }
}

TEST(DecodePartial, ThresholdIsSharp) {
  // One response below threshold must raise, never return wrong data.
  for (auto kind : {FrameworkKind::kLagrange, FrameworkKind::kCsa}) {
    const auto basis = appendix_basis(kind);
    const auto& p = basis.params();
    const auto files = random_files(p, basis.field(), 13);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
      std::vector<int> r_set;
      for (int i = 0; i < 3; ++i) {
        if (mask & (1u << i)) r_set.push_back(i);
      }
      const int r = static_cast<int>(r_set.size());
      const auto shares = framework_encode(basis, files, mask);
      const auto queries = framework_queries(basis, r_set, 0, mask + 1);
      const auto answers = framework_answers(basis, r_set, shares, queries);
      for (int d = 0; d < r; ++d) {
        const int needed = p.K + p.X + p.T - 1 + r - d;
        std::map<int, std::vector<FieldElement>> responses;
        for (int n = 0; n < needed - 1; ++n) responses[n] = answers[n];
        std::map<int, std::vector<FieldElement>> known;
        for (int e = 0; e < d; ++e) {
          known[r_set[e]] = {files[0].at(r_set[e], 0), files[0].at(r_set[e], 1)};
        }
        EXPECT_THROW(decode_partial(basis, {0, r_set}, responses, known),
                     InsufficientResponses);
      }
    }
  }
}

TEST(DecodePartial, BackEndsAgree) {
  // Same plaintext, theta, R and noise seeds: both decoders return the
  // same partial file (and both equal the plaintext).
  const auto lagrange = appendix_basis(FrameworkKind::kLagrange);
  const auto csa = appendix_basis(FrameworkKind::kCsa);
  const auto& p = lagrange.params();
  const auto files = random_files(p, lagrange.field(), 3141);
  const std::vector<int> r_set{0, 2};
  for (int theta = 0; theta < p.M; ++theta) {
    FieldMatrix out[2];
    int slot = 0;
    for (const BasisSet* basis : {&lagrange, &csa}) {
      const auto shares = framework_encode(*basis, files, 555);
      const auto queries = framework_queries(*basis, r_set, theta, 666);
      const auto answers = framework_answers(*basis, r_set, shares, queries);
      std::map<int, std::vector<FieldElement>> responses;
      for (int n = 0; n < 7; ++n) responses[n] = answers[n];
      out[slot++] = decode_partial(*basis, {theta, r_set}, responses, {});
    }
    EXPECT_TRUE(out[0] == out[1]);
    for (int idx = 0; idx < 2; ++idx) {
      for (int k = 0; k < p.K; ++k) {
        EXPECT_EQ(out[0].at(idx, k), files[theta].at(r_set[idx], k));
      }
    }
  }
}

TEST(AnswerStructure, LagrangeAnswerIsProductPolynomialEvaluation) {
  // Symbolic oracle: interpolate the storage and query polynomials from
  // their served evaluations, multiply coefficient-wise, sum over files and
  // rows, and compare evaluations at every alpha_n with the answers. The
  // product-sum has degree K+X+T+r-2 (= 4+r here).
  const auto basis = appendix_basis(FrameworkKind::kLagrange);
  const auto& p = basis.params();
  const Field& f = basis.field();
  const auto files = random_files(p, f, 2718);
  const std::vector<int> r_set{0, 1, 2};
  const int r = 3, theta = 0;
  const auto shares = framework_encode(basis, files, 515);
  const auto queries = framework_queries(basis, r_set, theta, 516);
  const auto answers = framework_answers(basis, r_set, shares, queries);

  for (int k = 0; k < p.K; ++k) {
    Poly product_sum(p.K + p.X + p.T + r - 1, f.zero());
    for (int m = 0; m < p.M; ++m) {
      for (int idx = 0; idx < r; ++idx) {
        const int i = r_set[idx];
        std::vector<std::pair<FieldElement, FieldElement>> fpts, qpts;
        for (int n = 0; n < p.K + p.X; ++n) {
          fpts.push_back({basis.alpha(n), shares[n].at(m, i)});
        }
        for (int n = 0; n < r + p.T; ++n) {
          qpts.push_back(
              {basis.alpha(n),
               queries[n][(static_cast<std::size_t>(m) * r + idx) * p.K + k]});
        }
        const Poly prod =
            poly_mul(lagrange_interpolate(fpts), lagrange_interpolate(qpts), f);
        ASSERT_LE(prod.size(), product_sum.size());
        for (std::size_t c = 0; c < prod.size(); ++c) {
          product_sum[c] = product_sum[c] + prod[c];
        }
      }
    }
    for (int n = 0; n < p.N; ++n) {
      EXPECT_EQ(poly_eval(product_sum, basis.alpha(n)), answers[n][k]);
    }
  }
}

TEST(AnswerStructure, CsaSystemMatrixIsCauchyVandermondeAndInvertible) {
  // For every residue set on instances with N <= 10, the matrix the CSA
  // decoder solves is the Cauchy-Vandermonde matrix built from the alphas
  // and the betas of the requested rows; P0-P3 make it nonsingular.
  const int shapes[][4] = {
      {8, 2, 2, 2}, {10, 3, 2, 2}, {6, 1, 1, 2}, {7, 2, 1, 2}};
  for (const auto& s : shapes) {
    const auto params = derive_system(s[0], s[1], s[2], s[3], 1);
    const auto q = smallest_prime_at_least(required_field_size(params));
    const BasisSet basis(FrameworkKind::kCsa, select_parameters(params, q),
                         params);
    const Field& f = basis.field();
    const int interference = params.K + params.X + params.T - 1;
    for (std::uint32_t mask = 1; mask < (1u << params.lambda); ++mask) {
      std::vector<int> r_set;
      for (int i = 0; i < params.lambda; ++i) {
        if (mask & (1u << i)) r_set.push_back(i);
      }
      const int dim = static_cast<int>(r_set.size()) + interference;
      for (int k = 0; k < params.K; ++k) {
        FieldMatrix cv(dim, dim, f);
        for (int e = 0; e < dim; ++e) {
          const FieldElement an = basis.alpha(e);
          for (std::size_t u = 0; u < r_set.size(); ++u) {
            cv.at(e, u) = (an - basis.beta(r_set[u], k)).inverse();
          }
          for (int jj = 0; jj < interference; ++jj) {
            cv.at(e, r_set.size() + jj) = an.pow(jj);
          }
        }
        EXPECT_TRUE(is_nonsingular(cv))
            << "N=" << s[0] << " mask=" << mask << " k=" << k;
      }
    }
  }
}

TEST(Certify, AppendixInstanceBothBackEnds) {
  for (auto kind : {FrameworkKind::kLagrange, FrameworkKind::kCsa}) {
    const auto cert = certify_framework(appendix_basis(kind), 3, 1234);
    EXPECT_TRUE(cert.all()) << cert.witness;
    EXPECT_TRUE(cert.witness.empty());
  }
}

TEST(Certify, CorruptedParametersFailWithWitness) {
  const auto params = derive_system(8, 2, 2, 2, 3);
  for (auto kind : {FrameworkKind::kLagrange, FrameworkKind::kCsa}) {
    auto enc = select_parameters(params, 11);
    enc.betas.at(0, 0) = enc.alphas[2];  // P3 violation, row stays distinct
    const BasisSet basis(kind, enc, params);
    const auto cert = certify_framework(basis, 2, 99);
    EXPECT_FALSE(cert.all());
    EXPECT_FALSE(cert.witness.empty());
  }
}

TEST(Certify, EnumerationGuard) {
  const auto params = derive_system(50, 35, 5, 3, 1);  // C(50,40) >> 10^6
  const auto q = smallest_prime_at_least(required_field_size(params));
  const BasisSet basis(FrameworkKind::kCsa, select_parameters(params, q), params);
  EXPECT_THROW(certify_framework(basis, 1, 0), EnumerationTooLarge);
}

TEST(Certify, JsonShape) {
  FrameworkCertificate cert;
  cert.f0 = cert.f1 = cert.f2 = cert.f3 = true;
  EXPECT_EQ(certificate_to_json(cert),
            "{\"f0\":true,\"f1\":true,\"f2\":true,\"f3\":true,\"feasible\":true}");
}

TEST(FrameworkNames, RoundTrip) {
  EXPECT_EQ(framework_from_name("lagrange"), FrameworkKind::kLagrange);
  EXPECT_EQ(framework_from_name("csa"), FrameworkKind::kCsa);
  EXPECT_EQ(framework_name(FrameworkKind::kCsa), "csa");
  EXPECT_THROW(framework_from_name("rs"), ConfigError);
}

}  // namespace
}  // namespace apir
