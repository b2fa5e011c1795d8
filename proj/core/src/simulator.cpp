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

#include "apir/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apir/rng.hpp"
#include "apir/wire.hpp"

namespace apir {

StragglerModel StragglerModel::fixed_set(std::vector<int> servers) {
  StragglerModel m;
  m.kind = Kind::kFixedSet;
  std::sort(servers.begin(), servers.end());
  m.servers = std::move(servers);
  return m;
}

StragglerModel StragglerModel::fixed_count(int count, int reshuffle_every) {
  StragglerModel m;
  m.kind = Kind::kFixedCount;
  m.count = count;
  m.reshuffle_every = std::max(0, reshuffle_every);
  return m;
}

StragglerModel StragglerModel::adversarial(
    std::vector<std::vector<int>> schedule) {
  StragglerModel m;
  m.kind = Kind::kAdversarial;
  m.schedule = std::move(schedule);
  for (auto& s : m.schedule) std::sort(s.begin(), s.end());
  return m;
}

namespace {

std::vector<int> slow_set_at(const StragglerModel& model, std::uint64_t tick,
                             int n_servers, std::uint64_t model_seed) {
  switch (model.kind) {
    case StragglerModel::Kind::kNone:
      return {};
    case StragglerModel::Kind::kFixedSet:
      return model.servers;
    case StragglerModel::Kind::kFixedCount: {
      const std::uint64_t epoch =
          model.reshuffle_every == 0 ? 0 : tick / model.reshuffle_every;
      Rng rng = Rng::derive(model_seed, {0x534c4f57u, epoch});
      std::set<int> pick;
      const int want = std::min(model.count, n_servers);
      while (static_cast<int>(pick.size()) < want) {
        pick.insert(static_cast<int>(rng.below(n_servers)));
      }
      return {pick.begin(), pick.end()};
    }
    case StragglerModel::Kind::kAdversarial: {
      if (model.schedule.empty()) return {};
      return model.schedule[tick % model.schedule.size()];
    }
  }
  return {};
}

// Servers that might emit at some tick, given the model. Used to detect a
// starved decoder: once all of these are drained the session is over.
std::vector<bool> can_ever_emit(const StragglerModel& model, int n_servers,
                                bool slow_emits, std::uint64_t model_seed) {
  std::vector<bool> can(n_servers, true);
  if (slow_emits) return can;
  switch (model.kind) {
    case StragglerModel::Kind::kNone:
      break;
    case StragglerModel::Kind::kFixedSet:
      for (int s : model.servers) {
        if (s >= 0 && s < n_servers) can[s] = false;
      }
      break;
    case StragglerModel::Kind::kFixedCount:
      if (model.count >= n_servers) {
        can.assign(n_servers, false);
      } else if (model.reshuffle_every == 0) {
        for (int s : slow_set_at(model, 0, n_servers, model_seed)) can[s] = false;
      }
      break;
    case StragglerModel::Kind::kAdversarial: {
      if (model.schedule.empty()) break;
      can.assign(n_servers, false);
      for (const auto& slow : model.schedule) {
        for (int n = 0; n < n_servers; ++n) {
          if (std::find(slow.begin(), slow.end(), n) == slow.end()) can[n] = true;
        }
      }
      break;
    }
  }
  return can;
}

}  // namespace

SessionReport run_session(const SessionConfig& cfg,
                          std::vector<TranscriptEvent>* transcript) {
  const auto wall_start = std::chrono::steady_clock::now();
  const SystemParams& p = cfg.params;
  const std::uint64_t q =
      cfg.q_override.value_or(smallest_prime_at_least(required_field_size(p)));
  const Field f(q);
  if (cfg.theta < 0 || cfg.theta >= p.M) throw BadIndex("theta out of range");

  const EncodingParameters enc = select_parameters(p, q);
  const BasisSet basis(cfg.framework, enc, p);
  const QueryArray arr = QueryArray::build(p.lambda);

  const Dataset data =
      cfg.dataset.has_value() ? *cfg.dataset : random_dataset(p, f, cfg.file_seed);
  const auto shares = encode_storage(basis, data, cfg.noise_seed);
  const auto queries = make_queries(basis, arr, cfg.theta, cfg.noise_seed);

  // Full answer streams, in sending order, computed up front; the straggler
  // model only gates delivery.
  std::vector<std::vector<ResponseBundle>> streams;
  streams.reserve(p.N);
  for (int n = 0; n < p.N; ++n) {
    streams.push_back(server_answer(shares[n], queries[n]));
  }

  AdaptiveDecoder decoder(basis, arr, cfg.theta);
  SessionReport report;
  std::vector<int> sent(p.N, 0);
  const bool slow_emits = cfg.slow_period > 0;
  const auto reachable = can_ever_emit(cfg.model, p.N, slow_emits, cfg.model_seed);
  const int fast_period = std::max(1, cfg.fast_period);
  const std::uint64_t max_ticks =
      cfg.max_ticks > 0
          ? cfg.max_ticks
          : 1000ull * static_cast<std::uint64_t>(p.P) *
                std::max(fast_period, std::max(cfg.slow_period,
                                               cfg.model.reshuffle_every));

  std::vector<int> last_slow(1, -1);  // sentinel so tick 0 is recorded
  bool done = false;
  std::uint64_t tick = 0;
  for (; !done; ++tick) {
    if (tick >= max_ticks) {
      throw DecodeExhausted("tick budget exhausted below every threshold");
    }
    const auto slow = slow_set_at(cfg.model, tick, p.N, cfg.model_seed);
    if (slow != last_slow) {
      report.straggler_trace.emplace_back(tick, slow);
      last_slow = slow;
    }
    bool all_drained = true;
    for (int n = 0; n < p.N; ++n) {
      if (reachable[n] && sent[n] < p.P) all_drained = false;
    }
    if (all_drained) {
      throw DecodeExhausted("response streams exhausted below every threshold");
    }
    for (int n = 0; n < p.N && !done; ++n) {
      const bool is_slow =
          std::binary_search(slow.begin(), slow.end(), n);
      const int period = is_slow ? cfg.slow_period : fast_period;
      if (period <= 0) continue;  // silent straggler
      if ((tick + 1) % static_cast<std::uint64_t>(period) != 0) continue;
      if (sent[n] >= p.P) continue;
      const ResponseBundle& resp = streams[n][sent[n]];
      decoder.push(resp);
      ++sent[n];
      if (transcript) {
        transcript->push_back(TranscriptEvent{
            tick, n, resp.h, resp.j, digest_hex(encode_response(resp, q))});
      }
      if (decoder.ready().has_value()) done = true;
    }
  }

  const int s = *decoder.ready();
  const FieldMatrix file = decoder.decode();
  report.committed_s = s;
  report.decode_ok = file == data.files[cfg.theta];
  report.responses_per_server = decoder.consumed_per_server();
  report.downloaded_elements =
      static_cast<std::uint64_t>(decoder.consumed_total()) * p.K;
  report.achieved_rate =
      Rational(static_cast<std::uint64_t>(p.P) * p.K, report.downloaded_elements);
  report.min_column_responses = decoder.min_column_responses(s);
  report.ticks = tick;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();
  return report;
}

std::vector<RateRow> sweep_rates(const SystemParams& params,
                                 FrameworkKind framework,
                                 const std::vector<int>& s_values, int trials,
                                 std::uint64_t seed) {
  std::vector<RateRow> rows;
  for (int s : s_values) {
    if (s < 0 || s >= params.lambda) throw SOutOfRange("S outside [0, lambda)");
    RateRow row;
    row.s = s;
    row.expected_rate = rate_and_cost(params, s).rate;
    int successes = 0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng = Rng::derive(seed, {0x52415445u, static_cast<std::uint64_t>(s),
                                   static_cast<std::uint64_t>(trial)});
      std::set<int> stragglers;
      while (static_cast<int>(stragglers.size()) < s) {
        stragglers.insert(static_cast<int>(rng.below(params.N)));
      }
      SessionConfig cfg;
      cfg.params = params;
      cfg.framework = framework;
      cfg.theta = trial % params.M;
      cfg.file_seed = rng.next_u64();
      cfg.noise_seed = rng.next_u64();
      cfg.model = StragglerModel::fixed_set({stragglers.begin(), stragglers.end()});
      const SessionReport rep = run_session(cfg);
      const bool ok = rep.decode_ok && rep.committed_s == s;
      if (ok) ++successes;
      if (trial == 0) {
        row.measured_rate = rep.achieved_rate;
        row.download_elements = rep.downloaded_elements;
        for (int n = 0; n < params.N; ++n) {
          row.responses_per_fast_server =
              std::max(row.responses_per_fast_server, rep.responses_per_server[n]);
        }
      }
    }
    row.success_fraction = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string rate_table_to_csv(const std::vector<RateRow>& rows) {
  std::ostringstream out;
  out << "S,expected_rate,measured_rate,rate_decimal,success_fraction,"
         "responses_per_fast_server,download_elements\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const auto& row : rows) {
    out << row.s << ',' << row.expected_rate.to_string() << ','
        << row.measured_rate.to_string() << ',' << row.measured_rate.to_double()
        << ',' << row.success_fraction << ',' << row.responses_per_fast_server
        << ',' << row.download_elements << '\n';
  }
  return out.str();
}

std::vector<ChurnRow> stress_identity_churn(const SystemParams& params,
                                            FrameworkKind framework, int count,
                                            const std::vector<int>& intervals,
                                            int trials, std::uint64_t seed) {
  std::vector<ChurnRow> rows;
  for (int interval : intervals) {
    if (interval < 0) throw ConfigError("reshuffle interval must be >= 0");
    ChurnRow row;
    row.reshuffle_every = interval;
    row.min_column_responses = params.N + 1;
    row.min_threshold_margin = params.N + 1;
    int successes = 0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng = Rng::derive(seed, {0x4348524eu, static_cast<std::uint64_t>(interval),
                                   static_cast<std::uint64_t>(trial)});
      SessionConfig cfg;
      cfg.params = params;
      cfg.framework = framework;
      cfg.theta = trial % params.M;
      cfg.file_seed = rng.next_u64();
      cfg.noise_seed = rng.next_u64();
      cfg.model_seed = rng.next_u64();
      cfg.model = StragglerModel::fixed_count(count, interval);
      try {
        const SessionReport rep = run_session(cfg);
        if (rep.decode_ok) ++successes;
        row.min_column_responses =
            std::min(row.min_column_responses, rep.min_column_responses);
        row.min_threshold_margin = std::min(
            row.min_threshold_margin,
            rep.min_column_responses - (params.N - rep.committed_s));
      } catch (const DecodeExhausted&) {
        // counted as failure
      }
    }
    row.success_fraction = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& events) {
  std::ostringstream out;
  for (const auto& e : events) {
    nlohmann::json j;
    j["tick"] = e.tick;
    j["server"] = e.server;
    j["h"] = e.h;
    j["j"] = e.j;
    j["digest"] = e.digest;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string session_report_to_json(const SessionReport& report,
                                   bool include_wall_time) {
  nlohmann::json j;
  j["committed_s"] = report.committed_s;
  j["decode_ok"] = report.decode_ok;
  j["responses_per_server"] = report.responses_per_server;
  j["downloaded_elements"] = report.downloaded_elements;
  j["achieved_rate"] = report.achieved_rate.to_string();
  j["min_column_responses"] = report.min_column_responses;
  j["ticks"] = report.ticks;
  if (include_wall_time) j["wall_seconds"] = report.wall_seconds;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [tick, set] : report.straggler_trace) {
    nlohmann::json e;
    e["tick"] = tick;
    e["stragglers"] = set;
    trace.push_back(e);
  }
  j["straggler_trace"] = trace;
  return j.dump(2);
}

}  // namespace apir
