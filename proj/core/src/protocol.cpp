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

#include "apir/protocol.hpp"

#include <algorithm>
#include <set>

#include "apir/rng.hpp"
#include "apir/stats.hpp"

namespace apir {
namespace {

constexpr std::uint64_t kStorageNoiseTag = 0x505354;  // protocol storage
constexpr std::uint64_t kQueryNoiseTag = 0x505155;    // protocol query
constexpr std::uint64_t kEnumerationGuard = 1000000;
constexpr int kSampledSubsets = 200;

int mod(int a, int m) { return ((a % m) + m) % m; }

int residue_position(const std::vector<int>& residues, int residue) {
  auto it = std::lower_bound(residues.begin(), residues.end(), residue);
  return static_cast<int>(it - residues.begin());
}

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

// Enumerates subsets (mode kAll, guarded) or draws kSampledSubsets random
// ones (mode kSample).
template <typename Fn>
void visit_subsets(int n, int k, SubsetMode mode, std::uint64_t seed, Fn fn) {
  if (mode == SubsetMode::kAll) {
    if (binomial_capped(n, k) > kEnumerationGuard) {
      throw EnumerationTooLarge("subset enumeration exceeds 10^6");
    }
    for_each_subset(n, k, fn);
    return;
  }
  Rng rng(seed);
  for (int s = 0; s < kSampledSubsets; ++s) {
    std::set<int> pick;
    while (static_cast<int>(pick.size()) < k) {
      pick.insert(static_cast<int>(rng.below(n)));
    }
    fn(std::vector<int>(pick.begin(), pick.end()));
  }
}

std::string describe_set(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

}  // namespace

Dataset random_dataset(const SystemParams& params, const Field& f,
                       std::uint64_t file_seed) {
  Dataset data;
  data.files.reserve(params.M);
  for (int m = 0; m < params.M; ++m) {
    Rng rng = Rng::derive(file_seed, {0x46494c45u, static_cast<std::uint64_t>(m)});
    FieldMatrix w(params.P, params.K, f);
    for (int i = 0; i < params.P; ++i) {
      for (int k = 0; k < params.K; ++k) w.at(i, k) = f(rng.below(f.q()));
    }
    data.files.push_back(std::move(w));
  }
  return data;
}

std::vector<StorageShare> encode_storage(const BasisSet& basis,
                                         const Dataset& data,
                                         std::uint64_t noise_seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  if (static_cast<int>(data.files.size()) != p.M) {
    throw ShapeMismatch("dataset must hold M files");
  }
  for (const auto& w : data.files) {
    if (static_cast<int>(w.rows()) != p.P || static_cast<int>(w.cols()) != p.K) {
      throw ShapeMismatch("file must be P x K");
    }
  }
  std::vector<StorageShare> shares;
  shares.reserve(p.N);
  for (int n = 0; n < p.N; ++n) {
    shares.push_back(StorageShare{n, FieldMatrix(p.M, p.P, f)});
  }
  for (int m = 0; m < p.M; ++m) {
    for (int i = 0; i < p.P; ++i) {
      const int res = mod(i, p.lambda);
      std::vector<FieldElement> noise;
      for (int k = p.K; k < p.K + p.X; ++k) {
        noise.push_back(f(keyed_uniform(
            noise_seed,
            {kStorageNoiseTag, static_cast<std::uint64_t>(m),
             static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)},
            f.q())));
      }
      for (int n = 0; n < p.N; ++n) {
        FieldElement acc = f.zero();
        for (int k = 0; k < p.K; ++k) {
          acc = acc + data.files[m].at(i, k) * basis.storage_at(res, k, n);
        }
        for (int k = p.K; k < p.K + p.X; ++k) {
          acc = acc + noise[k - p.K] * basis.storage_at(res, k, n);
        }
        shares[n].values.at(m, i) = acc;
      }
    }
  }
  return shares;
}

std::vector<QueryBundle> make_queries(const BasisSet& basis,
                                      const QueryArray& arr, int theta,
                                      std::uint64_t noise_seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  if (theta < 0 || theta >= p.M) throw BadIndex("theta out of range");
  const auto specs = column_specs(arr);

  std::vector<QueryBundle> bundles(p.N);
  for (int n = 0; n < p.N; ++n) {
    bundles[n].server = n;
    bundles[n].columns.reserve(specs.size());
  }
  for (const auto& spec : specs) {
    const int r = static_cast<int>(spec.rows.size());
    const std::size_t ci = bundles[0].columns.size();
    for (int n = 0; n < p.N; ++n) {
      ColumnQuery cq;
      cq.h = spec.h;
      cq.j = spec.j;
      cq.rows = spec.rows;
      cq.values.assign(static_cast<std::size_t>(p.M) * r * p.K, f.zero());
      bundles[n].columns.push_back(std::move(cq));
    }
    for (int m = 0; m < p.M; ++m) {
      for (int idx = 0; idx < r; ++idx) {
        const int res = mod(spec.rows[idx], p.lambda);
        for (int k = 0; k < p.K; ++k) {
          // Fresh noise per column instance, keyed so reruns with the same
          // seed are bit-identical and independent of evaluation order.
          std::vector<FieldElement> noise;
          for (int t = 0; t < p.T; ++t) {
            noise.push_back(f(keyed_uniform(
                noise_seed,
                {kQueryNoiseTag, static_cast<std::uint64_t>(spec.h),
                 static_cast<std::uint64_t>(spec.j),
                 static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(res),
                 static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t)},
                f.q())));
          }
          for (int n = 0; n < p.N; ++n) {
            FieldElement acc = f.zero();
            for (int t = 0; t < p.T; ++t) {
              acc = acc + noise[t] * basis.query_at(spec.residues, res, k, t, n);
            }
            if (m == theta) {
              acc = acc + basis.query_at(spec.residues, res, k, p.T, n);
            }
            bundles[n].columns[ci]
                .values[(static_cast<std::size_t>(m) * r + idx) * p.K + k] = acc;
          }
        }
      }
    }
  }
  return bundles;
}

std::vector<ResponseBundle> server_answer(const StorageShare& share,
                                          const QueryBundle& bundle) {
  if (share.server != bundle.server) {
    throw BadIndex("share and query bundle belong to different servers");
  }
  const int m_files = static_cast<int>(share.values.rows());
  std::vector<ResponseBundle> out;
  out.reserve(bundle.columns.size());
  for (const auto& cq : bundle.columns) {
    const int r = static_cast<int>(cq.rows.size());
    const int k_subs = static_cast<int>(cq.values.size()) / (m_files * r);
    ResponseBundle resp;
    resp.server = share.server;
    resp.h = cq.h;
    resp.j = cq.j;
    for (int k = 0; k < k_subs; ++k) {
      FieldElement acc;
      bool first = true;
      for (int m = 0; m < m_files; ++m) {
        for (int idx = 0; idx < r; ++idx) {
          const FieldElement term =
              cq.values[(static_cast<std::size_t>(m) * r + idx) * k_subs + k] *
              share.values.at(m, cq.rows[idx]);
          acc = first ? term : acc + term;
          first = false;
        }
      }
      resp.sub.push_back(acc);
    }
    out.push_back(std::move(resp));
  }
  return out;
}

AdaptiveDecoder::AdaptiveDecoder(const BasisSet& basis, const QueryArray& arr,
                                 int theta)
    : basis_(basis), arr_(arr), theta_(theta), specs_(column_specs(arr)) {
  const SystemParams& p = basis_.params();
  if (arr.lambda() != p.lambda || arr.p() != p.P) {
    throw ShapeMismatch("query array does not match system parameters");
  }
  consumed_.assign(p.N, 0);
  responses_.assign(p.P, std::vector<std::vector<FieldElement>>(p.N));
}

void AdaptiveDecoder::push(const ResponseBundle& resp) {
  const SystemParams& p = basis_.params();
  if (resp.server < 0 || resp.server >= p.N) {
    throw BadIndex("response from unknown server");
  }
  if (static_cast<int>(resp.sub.size()) != p.K) {
    throw ShapeMismatch("response must hold K sub-responses");
  }
  const int global = arr_.global_column(resp.h, resp.j);
  if (global != consumed_[resp.server]) {
    throw OrderViolation("server " + std::to_string(resp.server) +
                         " sent column " + std::to_string(global) +
                         ", expected " + std::to_string(consumed_[resp.server]));
  }
  responses_[global][resp.server] = resp.sub;
  ++consumed_[resp.server];
  ++consumed_total_;
}

std::optional<int> AdaptiveDecoder::ready() const {
  const SystemParams& p = basis_.params();
  for (int s = 0; s < p.lambda; ++s) {
    int count = 0;
    for (int n = 0; n < p.N; ++n) {
      if (consumed_[n] >= p.f[s]) ++count;
    }
    if (count >= p.N - s) return s;
  }
  return std::nullopt;
}

int AdaptiveDecoder::min_column_responses(int s) const {
  const SystemParams& p = basis_.params();
  int best = p.N + 1;
  for (int c = 0; c < p.f[s]; ++c) {
    int count = 0;
    for (int n = 0; n < p.N; ++n) {
      if (!responses_[c][n].empty()) ++count;
    }
    best = std::min(best, count);
  }
  return best;
}

FieldMatrix AdaptiveDecoder::decode() {
  const SystemParams& p = basis_.params();
  const Field& f = basis_.field();
  const auto maybe_s = ready();
  if (!maybe_s.has_value()) {
    throw InsufficientResponses("no straggler threshold met yet");
  }
  const int s = *maybe_s;

  std::vector<std::optional<std::vector<FieldElement>>> rows_known(p.P);
  FieldMatrix file(p.P, p.K, f);
  std::vector<bool> filled(p.P, false);

  for (int layer = s; layer >= 0; --layer) {
    const int d = s - layer;
    for (const auto& spec : specs_) {
      if (spec.h != layer) continue;
      const int global = arr_.global_column(spec.h, spec.j);

      std::map<int, std::vector<FieldElement>> responses;
      for (int n = 0; n < p.N; ++n) {
        if (!responses_[global][n].empty()) responses[n] = responses_[global][n];
      }
      std::map<int, std::vector<FieldElement>> known;
      PartialFileRequest req;
      req.theta = theta_;
      req.rows = spec.residues;
      for (int e = 0; e < d; ++e) {
        const int row = spec.compensation[e];
        if (!rows_known[row].has_value()) {
          throw InconsistentDecode("compensation row " + std::to_string(row) +
                                   " missing while decoding layer " +
                                   std::to_string(layer));
        }
        known[mod(row, p.lambda)] = *rows_known[row];
      }

      const FieldMatrix partial = decode_partial(basis_, req, responses, known);
      for (std::size_t idx = 0; idx < spec.rows.size(); ++idx) {
        const int row = spec.rows[idx];
        const int pos = residue_position(spec.residues, mod(row, p.lambda));
        std::vector<FieldElement> values;
        for (int k = 0; k < p.K; ++k) values.push_back(partial.at(pos, k));
        if (rows_known[row].has_value() && *rows_known[row] != values) {
          throw InconsistentDecode("row " + std::to_string(row) +
                                   " decoded twice with different values");
        }
        rows_known[row] = values;
        if (layer == 0) {
          for (int k = 0; k < p.K; ++k) file.at(row, k) = values[k];
          filled[row] = true;
        }
      }
    }
  }
  for (int i = 0; i < p.P; ++i) {
    if (!filled[i]) {
      throw InconsistentDecode("row " + std::to_string(i) +
                               " not covered by layer 0");
    }
  }
  return file;
}

DecodeResult adaptive_decode(const BasisSet& basis, const QueryArray& arr,
                             int theta,
                             const std::vector<ResponseBundle>& stream) {
  AdaptiveDecoder decoder(basis, arr, theta);
  for (const auto& resp : stream) {
    decoder.push(resp);
    if (auto s = decoder.ready(); s.has_value()) {
      DecodeResult result;
      result.need_more = false;
      result.committed_s = *s;
      result.file = decoder.decode();
      return result;
    }
  }
  return DecodeResult{};
}

RateCost rate_and_cost(const SystemParams& params, int s) {
  if (s < 0 || s >= params.lambda) {
    throw SOutOfRange("S must lie in [0, lambda)");
  }
  const std::uint64_t d = static_cast<std::uint64_t>(params.N - s) *
                          static_cast<std::uint64_t>(params.K) *
                          static_cast<std::uint64_t>(params.f[s]);
  RateCost rc;
  rc.download_cost = Rational(d, 1);
  rc.rate = Rational(static_cast<std::uint64_t>(params.P) *
                         static_cast<std::uint64_t>(params.K),
                     d);
  return rc;
}

SecrecyReport check_secrecy(const BasisSet& basis, SubsetMode mode, int draws,
                            std::uint64_t seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  SecrecyReport rep;
  rep.matrices_ok = true;

  if (p.X == 0) {
    // Nothing is secret-shared; the condition is vacuous.
    rep.pass = true;
    return rep;
  }

  for (int i = 0; i < p.lambda && rep.matrices_ok; ++i) {
    visit_subsets(p.N, p.X, mode, splitmix64(seed ^ 0xa11ull),
                  [&](const std::vector<int>& subset) {
                    if (!rep.matrices_ok) return;
                    FieldMatrix b(subset.size(), p.X, f);
                    for (std::size_t row = 0; row < subset.size(); ++row) {
                      for (int k = 0; k < p.X; ++k) {
                        b.at(row, k) = basis.storage_at(i, p.K + k, subset[row]);
                      }
                    }
                    if (!is_nonsingular(b)) {
                      rep.matrices_ok = false;
                      rep.witness = "singular B_{i,X}: i=" + std::to_string(i) +
                                    " servers=" + describe_set(subset);
                    }
                  });
  }

  if (draws > 0 && rep.matrices_ok) {
    rep.empirical_run = true;
    // View of the first X servers for every (file, row) pair, fresh noise
    // per draw, fixed file contents.
    const Dataset data = random_dataset(p, f, splitmix64(seed ^ 0xf11eull));
    double bins_d = 1.0;
    for (int k = 0; k < p.X; ++k) bins_d *= static_cast<double>(f.q());
    const bool joint = bins_d <= 16384.0;
    const std::size_t bins =
        joint ? static_cast<std::size_t>(bins_d) : static_cast<std::size_t>(f.q());

    // data_part[m][i][n] = sum_k w * b, the noise-free component.
    std::vector<std::vector<std::vector<FieldElement>>> data_part(
        p.M, std::vector<std::vector<FieldElement>>(
                 p.P, std::vector<FieldElement>(p.X, f.zero())));
    for (int m = 0; m < p.M; ++m) {
      for (int i = 0; i < p.P; ++i) {
        for (int n = 0; n < p.X; ++n) {
          FieldElement acc = f.zero();
          for (int k = 0; k < p.K; ++k) {
            acc = acc + data.files[m].at(i, k) *
                            basis.storage_at(mod(i, p.lambda), k, n);
          }
          data_part[m][i][n] = acc;
        }
      }
    }
    const std::size_t group_count =
        static_cast<std::size_t>(p.M) * p.P * (joint ? 1 : p.X);
    std::vector<std::vector<std::uint64_t>> hist(
        group_count, std::vector<std::uint64_t>(bins, 0));
    for (int draw = 0; draw < draws; ++draw) {
      for (int m = 0; m < p.M; ++m) {
        for (int i = 0; i < p.P; ++i) {
          Rng rng = Rng::derive(seed, {0x53454372u, static_cast<std::uint64_t>(draw),
                                       static_cast<std::uint64_t>(m),
                                       static_cast<std::uint64_t>(i)});
          std::vector<FieldElement> z;
          for (int k = 0; k < p.X; ++k) z.push_back(f(rng.below(f.q())));
          std::size_t joint_index = 0;
          for (int n = 0; n < p.X; ++n) {
            FieldElement v = data_part[m][i][n];
            for (int k = 0; k < p.X; ++k) {
              v = v + z[k] * basis.storage_at(mod(i, p.lambda), p.K + k, n);
            }
            if (joint) {
              joint_index = joint_index * f.q() + v.value();
            } else {
              hist[(static_cast<std::size_t>(m) * p.P + i) * p.X + n][v.value()]++;
            }
          }
          if (joint) {
            hist[static_cast<std::size_t>(m) * p.P + i][joint_index]++;
          }
        }
      }
    }
    rep.groups = static_cast<int>(group_count);
    rep.min_p = 1.0;
    for (const auto& h : hist) {
      rep.min_p = std::min(rep.min_p, chi_square_uniform_pvalue(h));
    }
  }
  rep.pass = rep.matrices_ok && (!rep.empirical_run || rep.min_p > 0.01);
  return rep;
}

PrivacyReport check_privacy(const BasisSet& basis, const QueryArray& arr,
                            SubsetMode mode, int draws, std::uint64_t seed) {
  const SystemParams& p = basis.params();
  const Field& f = basis.field();
  PrivacyReport rep;
  rep.matrices_ok = true;
  const auto specs = column_specs(arr);

  // Distinct residue sets appearing in the array.
  std::set<std::vector<int>> residue_sets;
  for (const auto& spec : specs) residue_sets.insert(spec.residues);

  for (const auto& r_set : residue_sets) {
    if (!rep.matrices_ok) break;
    for (int i : r_set) {
      if (!rep.matrices_ok) break;
      for (int k = 0; k < p.K && rep.matrices_ok; ++k) {
        visit_subsets(p.N, p.T, mode, splitmix64(seed ^ 0xb22ull),
                      [&](const std::vector<int>& subset) {
                        if (!rep.matrices_ok) return;
                        FieldMatrix v(subset.size(), p.T, f);
                        for (std::size_t row = 0; row < subset.size(); ++row) {
                          for (int t = 0; t < p.T; ++t) {
                            v.at(row, t) =
                                basis.query_at(r_set, i, k, t, subset[row]);
                          }
                        }
                        if (!is_nonsingular(v)) {
                          rep.matrices_ok = false;
                          rep.witness = "singular V: R=" + describe_set(r_set) +
                                        " i=" + std::to_string(i) +
                                        " k=" + std::to_string(k) +
                                        " servers=" + describe_set(subset);
                        }
                      });
      }
    }
  }

  if (draws > 0 && rep.matrices_ok && p.M >= 2) {
    rep.empirical_run = true;
    // Two-sample comparison of the first-T-servers query view for theta=0
    // versus theta=1, independent noise per draw, one chi-square per view
    // coordinate.
    struct Coord {
      const ColumnSpec* spec;
      int m, idx, k;
    };
    std::vector<Coord> coords;
    for (const auto& spec : specs) {
      for (int m = 0; m < p.M; ++m) {
        for (int idx = 0; idx < static_cast<int>(spec.rows.size()); ++idx) {
          for (int k = 0; k < p.K; ++k) coords.push_back({&spec, m, idx, k});
        }
      }
    }
    const std::size_t coord_count = coords.size() * p.T;
    std::vector<std::vector<std::uint64_t>> hist0(
        coord_count, std::vector<std::uint64_t>(f.q(), 0));
    auto hist1 = hist0;

    for (int theta = 0; theta <= 1; ++theta) {
      auto& hist = theta == 0 ? hist0 : hist1;
      for (int draw = 0; draw < draws; ++draw) {
        std::size_t c = 0;
        for (const auto& coord : coords) {
          const auto& spec = *coord.spec;
          const int res = mod(spec.rows[coord.idx], p.lambda);
          Rng rng = Rng::derive(
              seed, {0x50524976u, static_cast<std::uint64_t>(theta),
                     static_cast<std::uint64_t>(draw),
                     static_cast<std::uint64_t>(&coord - coords.data())});
          std::vector<FieldElement> z;
          for (int t = 0; t < p.T; ++t) z.push_back(f(rng.below(f.q())));
          for (int n = 0; n < p.T; ++n) {
            FieldElement acc = f.zero();
            for (int t = 0; t < p.T; ++t) {
              acc = acc + z[t] * basis.query_at(spec.residues, res, coord.k, t, n);
            }
            if (coord.m == theta) {
              acc = acc + basis.query_at(spec.residues, res, coord.k, p.T, n);
            }
            hist[c + n][acc.value()]++;
          }
          c += p.T;
        }
      }
    }
    rep.coordinates = static_cast<int>(coord_count);
    rep.min_p = 1.0;
    for (std::size_t c = 0; c < coord_count; ++c) {
      rep.min_p = std::min(rep.min_p,
                           chi_square_two_sample_pvalue(hist0[c], hist1[c]));
    }
  }
  rep.pass = rep.matrices_ok && (!rep.empirical_run || rep.min_p > 0.01);
  return rep;
}

}  // namespace apir
