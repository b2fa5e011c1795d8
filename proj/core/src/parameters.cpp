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

#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace apir {

SystemParams derive_system(int n, int k, int x, int t, int m) {
  if (n < 1 || k < 1 || x < 0 || t < 1) {
    throw ConfigError("system parameters require N,K,T >= 1 and X >= 0");
  }
  if (m < 1) throw ConfigError("at least one file is required");
  if (n <= k + x + t - 1) {
    throw InsufficientServers("N <= K+X+T-1: no layer budget for stragglers");
  }
  SystemParams p;
  p.N = n;
  p.K = k;
  p.X = x;
  p.T = t;
  p.M = m;
  p.lambda = n - (k + x + t - 1);

  std::int64_t lcm = 1;
  for (int i = 2; i <= p.lambda; ++i) lcm = std::lcm<std::int64_t>(lcm, i);
  const std::int64_t rows = p.lambda * lcm;
  if (rows > 50000000) {
    throw ConfigError("P = lambda*lcm(1..lambda) too large at lambda=" +
                      std::to_string(p.lambda));
  }
  p.P = static_cast<int>(rows);

  p.gamma.resize(p.lambda);
  p.gamma[0] = p.P / p.lambda;
  for (int h = 1; h < p.lambda; ++h) {
    p.gamma[h] = p.P / ((p.lambda - h) * (p.lambda - h + 1));
  }
  p.f.resize(p.lambda);
  int acc = 0;
  for (int h = 0; h < p.lambda; ++h) {
    acc += p.gamma[h];
    p.f[h] = acc;
  }
  return p;
}

std::uint64_t required_field_size(const SystemParams& params) {
  return static_cast<std::uint64_t>(params.N) +
         static_cast<std::uint64_t>(std::max(params.K, params.lambda));
}

EncodingParameters select_parameters(const SystemParams& params,
                                     std::uint64_t q) {
  const std::uint64_t bound = required_field_size(params);
  if (q < bound) {
    throw FieldTooSmall("q=" + std::to_string(q) + " below bound " +
                        std::to_string(bound));
  }
  const Field f(q);
  EncodingParameters enc;
  enc.q = q;
  enc.alphas.reserve(params.N);
  for (int n = 0; n < params.N; ++n) enc.alphas.push_back(f(n));

  const int lambda = params.lambda, k = params.K, x = params.X;
  enc.betas = FieldMatrix(lambda, k + x, f);
  // Noise columns reuse the first X evaluation points.
  for (int i = 0; i < lambda; ++i) {
    for (int j = 0; j < x; ++j) enc.betas.at(i, k + j) = enc.alphas[j];
  }
  // Data columns: fresh elements N, N+1, ..., cyclically shifted.
  if (k > lambda) {
    for (int i = 0; i < lambda; ++i) {
      for (int c = 0; c < k; ++c) {
        enc.betas.at(i, c) = f(params.N + (c + i) % k);
      }
    }
  } else {
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < lambda; ++i) {
        enc.betas.at(i, c) = f(params.N + (i + c) % lambda);
      }
    }
  }
  return enc;
}

ConstraintReport verify_constraints(const EncodingParameters& enc,
                                    const SystemParams& params) {
  ConstraintReport rep;
  const int lambda = params.lambda;
  const int kx = params.K + params.X;
  const int n = params.N;

  rep.p0 = true;
  for (int i = 0; i < lambda && rep.p0; ++i) {
    for (int a = 0; a < kx && rep.p0; ++a) {
      for (int b = a + 1; b < kx; ++b) {
        if (enc.betas.at(i, a) == enc.betas.at(i, b)) {
          rep.p0 = false;
          rep.p0_witness = {a, b};
          break;
        }
      }
    }
  }
  rep.p1 = true;
  for (int c = 0; c < params.K && rep.p1; ++c) {
    for (int a = 0; a < lambda && rep.p1; ++a) {
      for (int b = a + 1; b < lambda; ++b) {
        if (enc.betas.at(a, c) == enc.betas.at(b, c)) {
          rep.p1 = false;
          rep.p1_witness = {a, b};
          break;
        }
      }
    }
  }
  rep.p2 = true;
  for (int a = 0; a < n && rep.p2; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (enc.alphas[a] == enc.alphas[b]) {
        rep.p2 = false;
        rep.p2_witness = {a, b};
        break;
      }
    }
  }
  rep.p3 = true;
  for (int a = 0; a < n && rep.p3; ++a) {
    for (int i = 0; i < lambda && rep.p3; ++i) {
      for (int c = 0; c < params.K; ++c) {
        if (enc.alphas[a] == enc.betas.at(i, c)) {
          rep.p3 = false;
          rep.p3_witness = {a, i};
          break;
        }
      }
    }
  }
  return rep;
}

std::string encoding_to_json(const EncodingParameters& enc) {
  nlohmann::json j;
  j["q"] = enc.q;
  j["alphas"] = nlohmann::json::array();
  for (const auto& a : enc.alphas) j["alphas"].push_back(a.value());
  j["betas"] = nlohmann::json::array();
  for (std::size_t r = 0; r < enc.betas.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < enc.betas.cols(); ++c) {
      row.push_back(enc.betas.at(r, c).value());
    }
    j["betas"].push_back(row);
  }
  return j.dump();
}

EncodingParameters encoding_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EncodingParameters enc;
  enc.q = j.at("q").get<std::uint64_t>();
  const Field f(enc.q);
  for (const auto& a : j.at("alphas")) {
    enc.alphas.push_back(f(a.get<std::uint64_t>()));
  }
  const auto& rows = j.at("betas");
  const std::size_t nrows = rows.size();
  const std::size_t ncols = nrows == 0 ? 0 : rows[0].size();
  std::vector<FieldElement> entries;
  for (const auto& row : rows) {
    if (row.size() != ncols) throw ConfigError("ragged betas matrix");
    for (const auto& v : row) entries.push_back(f(v.get<std::uint64_t>()));
  }
  enc.betas = FieldMatrix(nrows, ncols, std::move(entries));
  return enc;
}

}  // namespace apir
