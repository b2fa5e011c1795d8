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

#include <benchmark/benchmark.h>

#include "apir/framework.hpp"
#include "apir/protocol.hpp"
#include "apir/rng.hpp"
#include "apir/simulator.hpp"

namespace {

apir::BasisSet make_basis(apir::FrameworkKind kind) {
  const auto params = apir::derive_system(8, 2, 2, 2, 3);
  const auto enc = apir::select_parameters(params, 11);
  return apir::BasisSet(kind, enc, params);
}

void BM_FieldMul(benchmark::State& state) {
  const apir::Field f(65537);
  apir::Rng rng(1);
  apir::FieldElement a = f(rng.below(65537)), b = f(1 + rng.below(65536));
  for (auto _ : state) {
    a = a * b;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FieldMul);

void BM_FieldInverse(benchmark::State& state) {
  const apir::Field f(65537);
  apir::Rng rng(2);
  apir::FieldElement a = f(1 + rng.below(65536));
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.inverse());
  }
}
BENCHMARK(BM_FieldInverse);

void BM_Interpolate(benchmark::State& state) {
  const apir::Field f(65537);
  apir::Rng rng(3);
  std::vector<std::pair<apir::FieldElement, apir::FieldElement>> pts;
  for (int i = 0; i < state.range(0); ++i) {
    pts.push_back({f(i), f(rng.below(65537))});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(apir::lagrange_interpolate(pts));
  }
}
BENCHMARK(BM_Interpolate)->Arg(8)->Arg(16)->Arg(32);

void BM_EncodeStorage(benchmark::State& state) {
  const auto basis = make_basis(apir::FrameworkKind::kLagrange);
  const auto data =
      apir::random_dataset(basis.params(), basis.field(), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apir::encode_storage(basis, data, 7));
  }
}
BENCHMARK(BM_EncodeStorage);

void BM_FullSession(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? apir::FrameworkKind::kLagrange
                                        : apir::FrameworkKind::kCsa;
  apir::SessionConfig cfg;
  cfg.params = apir::derive_system(8, 2, 2, 2, 3);
  cfg.framework = kind;
  cfg.model = apir::StragglerModel::fixed_set({0});
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.file_seed = ++seed;
    benchmark::DoNotOptimize(apir::run_session(cfg));
  }
}
BENCHMARK(BM_FullSession)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
