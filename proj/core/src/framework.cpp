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

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apir/rng.hpp"

namespace apir {

std::string framework_name(FrameworkKind kind) {
  return kind == FrameworkKind::kLagrange ? "lagrange" : "csa";
}

FrameworkKind framework_from_name(const std::string& name) {
  if (name == "lagrange") return FrameworkKind::kLagrange;
  if (name == "csa") return FrameworkKind::kCsa;
  throw ConfigError("unknown framework '" + name + "'");
}

namespace {

int index_in(const std::vector<int>& sorted, int value) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it == sorted.end() || *it != value) {
    throw BadIndex("row " + std::to_string(value) + " not in R");
  }
  return static_cast<int>(it - sorted.begin());
}

std::vector<int> mask_to_set(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1) out.push_back(i);
  }
  return out;
}

std::uint32_t set_to_mask(const std::vector<int>& set) {
  std::uint32_t mask = 0;
  for (int v : set) mask |= 1u << v;
  return mask;
}

}  // namespace

BasisSet::BasisSet(FrameworkKind kind, EncodingParameters enc,
                   SystemParams params)
    : kind_(kind),
      enc_(std::move(enc)),
      params_(std::move(params)),
      field_(enc_.q) {
  // P0-P3 are deliberately not enforced here: certify_framework is the
  // judge of feasibility and must be able to inspect a broken parameter
  // set. If precomputation hits a pole the tables stay empty and every
  // lookup falls back to direct evaluation (which reports the pole).
  try {
    const int lambda = params_.lambda, kx = params_.K + params_.X, n = params_.N;
    storage_table_.reserve(static_cast<std::size_t>(lambda) * kx * n);
    for (int i = 0; i < lambda; ++i) {
      for (int k = 0; k < kx; ++k) {
        for (int s = 0; s < n; ++s) {
          storage_table_.push_back(storage_basis(i, k, enc_.alphas[s]));
        }
      }
    }
    // Query tables for every nonempty residue subset; lambda is small by
    // construction (P grows as lambda * lcm(1..lambda)). Skipped when the
    // tables would be large; query_at then evaluates on demand.
    const double table_entries = static_cast<double>(1ull << std::min(lambda, 40)) *
                                 lambda * params_.K * (params_.T + 1) * n;
    if (lambda <= 16 && table_entries <= (1 << 22)) {
      query_tables_.resize(std::size_t{1} << lambda);
      for (std::uint32_t mask = 1; mask < query_tables_.size(); ++mask) {
        const auto r_set = mask_to_set(mask);
        auto& table = query_tables_[mask];
        table.reserve(r_set.size() * params_.K * (params_.T + 1) * n);
        for (int i : r_set) {
          for (int k = 0; k < params_.K; ++k) {
            for (int t = 0; t <= params_.T; ++t) {
              for (int s = 0; s < n; ++s) {
                table.push_back(query_basis(r_set, i, k, t, enc_.alphas[s]));
              }
            }
          }
        }
      }
    }
  } catch (const Error&) {
    storage_table_.clear();
    query_tables_.clear();
  }
}

FieldElement BasisSet::storage_basis(int i, int k, FieldElement x) const {
  const int kx = params_.K + params_.X;
  if (i < 0 || i >= params_.lambda || k < 0 || k >= kx) {
    throw BadIndex("storage basis index out of range");
  }
  if (kind_ == FrameworkKind::kLagrange) {
    FieldElement num = field_.one(), den = field_.one();
    for (int j = 0; j < kx; ++j) {
      if (j == k) continue;
      num = num * (x - beta(i, j));
      den = den * (beta(i, k) - beta(i, j));
    }
    return num / den;
  }
  // CSA: Cauchy term for data columns, Vandermonde for noise columns.
  if (k < params_.K) {
    if (x == beta(i, k)) {
      throw PoleHit("CSA storage basis evaluated at its pole");
    }
    return (x - beta(i, k)).inverse();
  }
  return x.pow(static_cast<std::uint64_t>(k - params_.K));
}

FieldElement BasisSet::query_basis(const std::vector<int>& r_set, int i, int k,
                                   int t, FieldElement x) const {
  if (t < 0 || t > params_.T || k < 0 || k >= params_.K) {
    throw BadIndex("query basis index out of range");
  }
  index_in(r_set, i);  // validates i in R
  if (kind_ == FrameworkKind::kLagrange) {
    if (t < params_.T) {
      // Lagrange node alpha_t of the grid {alpha_0..alpha_{T-1}, beta_{j,k}}.
      FieldElement acc = field_.one();
      for (int j = 0; j < params_.T; ++j) {
        if (j == t) continue;
        acc = acc * (x - alpha(j)) / (alpha(t) - alpha(j));
      }
      for (int j : r_set) {
        acc = acc * (x - beta(j, k)) / (alpha(t) - beta(j, k));
      }
      return acc;
    }
    // Node beta_{i,k} of the same grid.
    FieldElement acc = field_.one();
    for (int j : r_set) {
      if (j == i) continue;
      acc = acc * (x - beta(j, k)) / (beta(i, k) - beta(j, k));
    }
    for (int j = 0; j < params_.T; ++j) {
      acc = acc * (x - alpha(j)) / (beta(i, k) - alpha(j));
    }
    return acc;
  }
  // CSA.
  if (t < params_.T) {
    FieldElement acc = x.pow(static_cast<std::uint64_t>(t));
    for (int kk = 0; kk < params_.K; ++kk) {
      acc = acc * (x - beta(i, kk));
    }
    return acc;
  }
  FieldElement acc = field_.one();
  for (int j = 0; j < params_.K; ++j) {
    if (j == k) continue;
    acc = acc * (x - beta(i, j)) / (beta(i, k) - beta(i, j));
  }
  return acc;
}

FieldElement BasisSet::storage_at(int i, int k, int n) const {
  if (storage_table_.empty()) return storage_basis(i, k, enc_.alphas[n]);
  return storage_table_[(static_cast<std::size_t>(i) * (params_.K + params_.X) + k) *
                            params_.N +
                        n];
}

FieldElement BasisSet::query_at(const std::vector<int>& r_set, int i, int k,
                                int t, int n) const {
  const std::uint32_t mask = set_to_mask(r_set);
  if (mask >= query_tables_.size() || query_tables_[mask].empty()) {
    return query_basis(r_set, i, k, t, enc_.alphas[n]);
  }
  const std::size_t idx = static_cast<std::size_t>(index_in(r_set, i));
  const std::size_t stride_t = params_.N;
  const std::size_t stride_k = (params_.T + 1) * stride_t;
  const std::size_t stride_i = params_.K * stride_k;
  return query_tables_[mask][idx * stride_i + k * stride_k + t * stride_t + n];
}

FieldMatrix decode_partial(
    const BasisSet& basis, const PartialFileRequest& req,
    const std::map<int, std::vector<FieldElement>>& responses,
    const std::map<int, std::vector<FieldElement>>& known_rows) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  const int r = static_cast<int>(req.rows.size());
  const int d = static_cast<int>(known_rows.size());
  if (r < 1 || r > p.lambda) throw BadIndex("partial file request out of range");
  for (const auto& [row, values] : known_rows) {
    index_in(req.rows, row);
    if (static_cast<int>(values.size()) != p.K) {
      throw ShapeMismatch("known row must hold K symbols");
    }
  }
  const int needed = p.K + p.X + p.T - 1 + r - d;
  if (static_cast<int>(responses.size()) < needed) {
    throw InsufficientResponses(
        "have " + std::to_string(responses.size()) + " responses, need " +
        std::to_string(needed) + " with " + std::to_string(d) + " known rows");
  }
  std::vector<int> servers;
  for (const auto& [n, values] : responses) {
    if (n < 0 || n >= p.N) throw BadIndex("response from unknown server");
    if (static_cast<int>(values.size()) != p.K) {
      throw ShapeMismatch("response must hold K sub-responses");
    }
    if (static_cast<int>(servers.size()) < needed) servers.push_back(n);
  }

  FieldMatrix out(r, p.K, f);
  if (basis.kind() == FrameworkKind::kLagrange) {
    // The product polynomial sum_m sum_i q~ * f~ has degree K+X+T+r-2; its
    // value at beta_{i,k} is the desired symbol w~_{i,k}, so known rows
    // contribute interpolation points alongside the server evaluations.
    for (int k = 0; k < p.K; ++k) {
      std::vector<std::pair<FieldElement, FieldElement>> pts;
      pts.reserve(needed + d);
      for (int n : servers) pts.emplace_back(basis.alpha(n), responses.at(n)[k]);
      for (const auto& [row, values] : known_rows) {
        pts.emplace_back(basis.beta(row, k), values[k]);
      }
      const Poly answer = lagrange_interpolate(pts);
      for (int idx = 0; idx < r; ++idx) {
        out.at(idx, k) = poly_eval(answer, basis.beta(req.rows[idx], k));
      }
    }
  } else {
    // CSA: desired symbols sit on Cauchy terms 1/(alpha_n - beta_{i,k}),
    // interference on Vandermonde terms alpha_n^j, j < K+X+T-1. Known rows
    // move their Cauchy contribution to the right-hand side.
    const int interference = p.K + p.X + p.T - 1;
    std::vector<int> unknown;
    for (int row : req.rows) {
      if (known_rows.count(row) == 0) unknown.push_back(row);
    }
    const int dim = static_cast<int>(unknown.size()) + interference;
    for (int k = 0; k < p.K; ++k) {
      FieldMatrix a(dim, dim, f);
      std::vector<FieldElement> rhs(dim, f.zero());
      for (int e = 0; e < dim; ++e) {
        const int n = servers[e];
        const FieldElement an = basis.alpha(n);
        for (std::size_t u = 0; u < unknown.size(); ++u) {
          a.at(e, u) = (an - basis.beta(unknown[u], k)).inverse();
        }
        for (int j = 0; j < interference; ++j) {
          a.at(e, unknown.size() + j) = an.pow(static_cast<std::uint64_t>(j));
        }
        FieldElement b = responses.at(n)[k];
        for (const auto& [row, values] : known_rows) {
          b = b - values[k] * (an - basis.beta(row, k)).inverse();
        }
        rhs[e] = b;
      }
      const auto solution = solve_linear(a, rhs);
      for (std::size_t u = 0; u < unknown.size(); ++u) {
        out.at(index_in(req.rows, unknown[u]), k) = solution[u];
      }
    }
  }
  for (const auto& [row, values] : known_rows) {
    for (int k = 0; k < p.K; ++k) out.at(index_in(req.rows, row), k) = values[k];
  }
  return out;
}

std::vector<FieldMatrix> framework_encode(const BasisSet& basis,
                                          const std::vector<FieldMatrix>& files,
                                          std::uint64_t noise_seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  if (static_cast<int>(files.size()) != p.M) {
    throw ShapeMismatch("expected M files");
  }
  for (const auto& w : files) {
    if (static_cast<int>(w.rows()) != p.lambda ||
        static_cast<int>(w.cols()) != p.K) {
      throw ShapeMismatch("framework file must be lambda x K");
    }
  }
  std::vector<FieldMatrix> shares(p.N, FieldMatrix(p.M, p.lambda, f));
  for (int m = 0; m < p.M; ++m) {
    for (int i = 0; i < p.lambda; ++i) {
      std::vector<FieldElement> noise;
      for (int k = p.K; k < p.K + p.X; ++k) {
        noise.push_back(f(keyed_uniform(
            noise_seed, {0x5354u, static_cast<std::uint64_t>(m),
                         static_cast<std::uint64_t>(i),
                         static_cast<std::uint64_t>(k)},
            f.q())));
      }
      for (int n = 0; n < p.N; ++n) {
        FieldElement acc = f.zero();
        for (int k = 0; k < p.K; ++k) {
          acc = acc + files[m].at(i, k) * basis.storage_at(i, k, n);
        }
        for (int k = p.K; k < p.K + p.X; ++k) {
          acc = acc + noise[k - p.K] * basis.storage_at(i, k, n);
        }
        shares[n].at(m, i) = acc;
      }
    }
  }
  return shares;
}

std::vector<std::vector<FieldElement>> framework_queries(
    const BasisSet& basis, const std::vector<int>& r_set, int theta,
    std::uint64_t noise_seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  if (theta < 0 || theta >= p.M) throw BadIndex("theta out of range");
  const int r = static_cast<int>(r_set.size());
  std::vector<std::vector<FieldElement>> queries(
      p.N, std::vector<FieldElement>(static_cast<std::size_t>(p.M) * r * p.K,
                                     f.zero()));
  for (int m = 0; m < p.M; ++m) {
    for (int idx = 0; idx < r; ++idx) {
      const int i = r_set[idx];
      for (int k = 0; k < p.K; ++k) {
        std::vector<FieldElement> noise;
        for (int t = 0; t < p.T; ++t) {
          noise.push_back(f(keyed_uniform(
              noise_seed, {0x5155u, static_cast<std::uint64_t>(m),
                           static_cast<std::uint64_t>(set_to_mask(r_set)),
                           static_cast<std::uint64_t>(i),
                           static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(t)},
              f.q())));
        }
        for (int n = 0; n < p.N; ++n) {
          FieldElement acc = f.zero();
          for (int t = 0; t < p.T; ++t) {
            acc = acc + noise[t] * basis.query_at(r_set, i, k, t, n);
          }
          if (m == theta) {
            acc = acc + basis.query_at(r_set, i, k, p.T, n);
          }
          queries[n][(static_cast<std::size_t>(m) * r + idx) * p.K + k] = acc;
        }
      }
    }
  }
  return queries;
}

std::vector<std::vector<FieldElement>> framework_answers(
    const BasisSet& basis, const std::vector<int>& r_set,
    const std::vector<FieldMatrix>& shares,
    const std::vector<std::vector<FieldElement>>& queries) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  const int r = static_cast<int>(r_set.size());
  std::vector<std::vector<FieldElement>> answers(
      p.N, std::vector<FieldElement>(p.K, f.zero()));
  for (int n = 0; n < p.N; ++n) {
    for (int k = 0; k < p.K; ++k) {
      FieldElement acc = f.zero();
      for (int m = 0; m < p.M; ++m) {
        for (int idx = 0; idx < r; ++idx) {
          acc = acc + queries[n][(static_cast<std::size_t>(m) * r + idx) * p.K + k] *
                          shares[n].at(m, r_set[idx]);
        }
      }
      answers[n][k] = acc;
    }
  }
  return answers;
}

namespace {

// C(n, k) capped at 2 * kEnumerationGuard to avoid overflow.
constexpr std::uint64_t kEnumerationGuard = 1000000;

std::uint64_t binomial_capped(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<std::uint64_t>(n - k + i) / i;
    if (acc > 2 * kEnumerationGuard) return acc;
  }
  return acc;
}

// Calls fn for every k-subset of [0, n), ascending order.
template <typename Fn>
void for_each_subset(int n, int k, Fn fn) {
  if (k == 0) {
    fn(std::vector<int>{});
    return;
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

std::string describe_set(const std::vector<int>& s) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << ',';
    out << s[i];
  }
  out << '}';
  return out.str();
}

}  // namespace

FrameworkCertificate certify_framework(const BasisSet& basis, int trials,
                                       std::uint64_t seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  if (binomial_capped(p.N, p.K + p.X) > kEnumerationGuard ||
      binomial_capped(p.N, p.X) > kEnumerationGuard ||
      binomial_capped(p.N, p.T) > kEnumerationGuard) {
    throw EnumerationTooLarge("subset enumeration exceeds 10^6");
  }
  if (trials < 1) trials = 1;

  FrameworkCertificate cert;
  cert.f0 = cert.f1 = cert.f2 = cert.f3 = true;

  // F~0: reconstruction from any K+X servers.
  try {
    for (int i = 0; i < p.lambda && cert.f0; ++i) {
      for_each_subset(p.N, p.K + p.X, [&](const std::vector<int>& subset) {
        if (!cert.f0) return;
        FieldMatrix b(subset.size(), p.K + p.X, f);
        for (std::size_t row = 0; row < subset.size(); ++row) {
          for (int k = 0; k < p.K + p.X; ++k) {
            b.at(row, k) = basis.storage_at(i, k, subset[row]);
          }
        }
        if (!is_nonsingular(b)) {
          cert.f0 = false;
          cert.witness = "F0: singular storage matrix, i=" + std::to_string(i) +
                         " servers=" + describe_set(subset);
        }
      });
    }
  } catch (const Error& e) {
    cert.f0 = false;
    cert.witness = std::string("F0: ") + e.what();
  }

  // F~1: X-subset storage-noise matrices and T-subset query-noise matrices.
  try {
    if (p.X > 0) {
      for (int i = 0; i < p.lambda && cert.f1; ++i) {
        for_each_subset(p.N, p.X, [&](const std::vector<int>& subset) {
          if (!cert.f1) return;
          FieldMatrix b(subset.size(), p.X, f);
          for (std::size_t row = 0; row < subset.size(); ++row) {
            for (int k = 0; k < p.X; ++k) {
              b.at(row, k) = basis.storage_at(i, p.K + k, subset[row]);
            }
          }
          if (!is_nonsingular(b)) {
            cert.f1 = false;
            cert.witness = "F1: singular secrecy matrix, i=" +
                           std::to_string(i) + " servers=" + describe_set(subset);
          }
        });
      }
    }
    for (std::uint32_t mask = 1; mask < (1u << p.lambda) && cert.f1; ++mask) {
      const auto r_set = mask_to_set(mask);
      for (int i : r_set) {
        if (!cert.f1) break;
        for (int k = 0; k < p.K && cert.f1; ++k) {
          for_each_subset(p.N, p.T, [&](const std::vector<int>& subset) {
            if (!cert.f1) return;
            FieldMatrix v(subset.size(), p.T, f);
            for (std::size_t row = 0; row < subset.size(); ++row) {
              for (int t = 0; t < p.T; ++t) {
                v.at(row, t) = basis.query_at(r_set, i, k, t, subset[row]);
              }
            }
            if (!is_nonsingular(v)) {
              cert.f1 = false;
              cert.witness = "F1: singular privacy matrix, R=" +
                             describe_set(r_set) + " i=" + std::to_string(i) +
                             " k=" + std::to_string(k) +
                             " servers=" + describe_set(subset);
            }
          });
        }
      }
    }
  } catch (const Error& e) {
    cert.f1 = false;
    cert.witness = std::string("F1: ") + e.what();
  }

  // F~2 / F~3: decode round trips, exhaustive over response subsets and
  // known-row subsets, randomized over file contents.
  for (std::uint32_t mask = 1; mask < (1u << p.lambda); ++mask) {
    const auto r_set = mask_to_set(mask);
    const int r = static_cast<int>(r_set.size());
    for (int d = 0; d < r; ++d) {
      bool& flag = (d == 0) ? cert.f2 : cert.f3;
      if (!flag) continue;
      try {
        for (int trial = 0; trial < trials && flag; ++trial) {
          const std::uint64_t trial_seed =
              splitmix64(seed ^ (mask * 1000003ull + d * 101ull + trial));
          std::vector<FieldMatrix> files(p.M, FieldMatrix(p.lambda, p.K, f));
          if (trial != 0) {
            Rng rng(trial_seed);
            for (auto& w : files) {
              for (int i = 0; i < p.lambda; ++i) {
                for (int k = 0; k < p.K; ++k) w.at(i, k) = f(rng.below(f.q()));
              }
            }
          }
          const int theta = trial % p.M;
          const auto shares = framework_encode(basis, files, trial_seed + 1);
          const auto queries =
              framework_queries(basis, r_set, theta, trial_seed + 2);
          const auto answers = framework_answers(basis, r_set, shares, queries);

          for_each_subset(p.N, p.N - (p.lambda - r + d), [&](const std::vector<int>& delta) {
            if (!flag) return;
            for_each_subset(r, d, [&](const std::vector<int>& dpos) {
              if (!flag) return;
              std::map<int, std::vector<FieldElement>> responses;
              for (int n : delta) responses[n] = answers[n];
              std::map<int, std::vector<FieldElement>> known;
              for (int pos : dpos) {
                const int row = r_set[pos];
                std::vector<FieldElement> values;
                for (int k = 0; k < p.K; ++k) values.push_back(files[theta].at(row, k));
                known[row] = values;
              }
              PartialFileRequest req{theta, r_set};
              const FieldMatrix got = decode_partial(basis, req, responses, known);
              for (int idx = 0; idx < r && flag; ++idx) {
                for (int k = 0; k < p.K; ++k) {
                  if (got.at(idx, k) != files[theta].at(r_set[idx], k)) {
                    flag = false;
                    cert.witness =
                        std::string(d == 0 ? "F2" : "F3") +
                        ": decode mismatch, R=" + describe_set(r_set) +
                        " d=" + std::to_string(d) +
                        " delta=" + describe_set(delta);
                    break;
                  }
                }
              }
            });
          });
        }
      } catch (const Error& e) {
        flag = false;
        cert.witness = std::string(d == 0 ? "F2: " : "F3: ") + e.what() +
                       ", R=" + describe_set(r_set);
      }
    }
  }
  return cert;
}

std::string certificate_to_json(const FrameworkCertificate& cert) {
  nlohmann::json j;
  j["f0"] = cert.f0;
  j["f1"] = cert.f1;
  j["f2"] = cert.f2;
  j["f3"] = cert.f3;
  j["feasible"] = cert.all();
  if (!cert.witness.empty()) j["witness"] = cert.witness;
  return j.dump();
}

}  // namespace apir
