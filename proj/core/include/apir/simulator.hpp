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

// Deterministic discrete-tick simulator: N in-process servers answer under
// a configurable straggler model while the adaptive decoder consumes the
// stream. Time is counted in ticks (one response slot per responsive
// server per tick); download cost is counted in field elements.

#ifndef APIR_SIMULATOR_HPP_
#define APIR_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apir/protocol.hpp"

namespace apir {

struct StragglerModel {
  enum class Kind { kNone, kFixedSet, kFixedCount, kAdversarial };
  Kind kind = Kind::kNone;
  std::vector<int> servers;                 // kFixedSet
  int count = 0;                            // kFixedCount
  int reshuffle_every = 1;                  // kFixedCount: ticks per redraw,
                                            // 0 keeps the drawn set permanent
  std::vector<std::vector<int>> schedule;   // kAdversarial: per-tick, cycled

  static StragglerModel none() { return {}; }
  static StragglerModel fixed_set(std::vector<int> servers);
  static StragglerModel fixed_count(int count, int reshuffle_every);
  static StragglerModel adversarial(std::vector<std::vector<int>> schedule);
};

struct SessionConfig {
  SystemParams params;
  FrameworkKind framework = FrameworkKind::kLagrange;
  int theta = 0;
  std::uint64_t file_seed = 1;
  std::uint64_t noise_seed = 2;
  std::uint64_t model_seed = 3;
  StragglerModel model;
  std::optional<std::uint64_t> q_override;
  std::optional<Dataset> dataset;  // generated from file_seed when absent
  int fast_period = 1;             // ticks between responses when responsive
  int slow_period = 0;             // 0: stragglers stay silent
  std::uint64_t max_ticks = 0;     // 0: generous default budget
};

struct TranscriptEvent {
  std::uint64_t tick = 0;
  int server = 0;
  int h = 0;
  int j = 0;
  std::string digest;  // FNV-1a64 of the canonical response bytes
};

struct SessionReport {
  int committed_s = -1;
  bool decode_ok = false;
  std::vector<int> responses_per_server;
  std::uint64_t downloaded_elements = 0;  // responses consumed x K
  Rational achieved_rate;                 // P*K / downloaded_elements
  int min_column_responses = 0;
  std::uint64_t ticks = 0;
  double wall_seconds = 0.0;
  // (tick, straggler set) recorded whenever the set changes.
  std::vector<std::pair<std::uint64_t, std::vector<int>>> straggler_trace;
};

// Runs encode -> query -> gated delivery -> adaptive decode. Throws
// DecodeExhausted when every server that could still respond has finished
// and no threshold was reached (only possible beyond lambda-1 permanent
// stragglers).
SessionReport run_session(const SessionConfig& cfg,
                          std::vector<TranscriptEvent>* transcript = nullptr);

struct RateRow {
  int s = 0;
  Rational expected_rate;
  Rational measured_rate;
  double success_fraction = 0.0;
  int responses_per_fast_server = 0;
  std::uint64_t download_elements = 0;
};

// FixedSet sessions over random straggler sets and files; the measured
// rate must match R_S exactly under this model.
std::vector<RateRow> sweep_rates(const SystemParams& params,
                                 FrameworkKind framework,
                                 const std::vector<int>& s_values, int trials,
                                 std::uint64_t seed);

std::string rate_table_to_csv(const std::vector<RateRow>& rows);

struct ChurnRow {
  int reshuffle_every = 0;
  double success_fraction = 0.0;
  // Smallest per-column response count observed at decode time; meeting the
  // per-query threshold means this never dips below N - committed_S.
  int min_column_responses = 0;
  int min_threshold_margin = 0;  // min over sessions of (responses - (N-S))
};

// FixedCount churn with S = count stragglers whose identities reshuffle
// every `interval` ticks.
std::vector<ChurnRow> stress_identity_churn(const SystemParams& params,
                                            FrameworkKind framework, int count,
                                            const std::vector<int>& intervals,
                                            int trials, std::uint64_t seed);

std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& events);

std::string session_report_to_json(const SessionReport& report,
                                   bool include_wall_time);

}  // namespace apir

#endif  // APIR_SIMULATOR_HPP_
