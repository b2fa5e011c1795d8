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

// Command-line front end: params, qarray, certify, simulate, rates, audit.
// Exit codes: 0 success / all checks pass, 1 a check failed (report
// printed), 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apir/framework.hpp"
#include "apir/parameters.hpp"
#include "apir/protocol.hpp"
#include "apir/query_array.hpp"
#include "apir/rng.hpp"
#include "apir/simulator.hpp"
#include "apir/wire.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 76921;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) return *flag;
  if (const char* env = std::getenv("ADAPTIVE_PIR_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return kDefaultSeed;
}

struct InstanceFlags {
  int n = 0, k = 0, x = 0, t = 1, m = 1;
  void add_to(CLI::App* cmd, bool with_m = true) {
    cmd->add_option("-N,--servers", n, "number of servers")->required();
    cmd->add_option("-K,--rate", k, "storage rate parameter K")->required();
    cmd->add_option("-X,--secure", x, "storage security threshold X")
        ->default_val(0);
    cmd->add_option("-T,--colluding", t, "privacy threshold T")->default_val(1);
    if (with_m) cmd->add_option("-M,--files", m, "number of files")->default_val(1);
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw apir::ConfigError("cannot open output file " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw apir::ConfigError("cannot open file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

apir::StragglerModel parse_straggler(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return apir::StragglerModel::none();
  if (kind == "fixed_set") {
    return apir::StragglerModel::fixed_set(j.at("set").get<std::vector<int>>());
  }
  if (kind == "fixed_count") {
    return apir::StragglerModel::fixed_count(
        j.at("count").get<int>(), j.value("reshuffle_every", 0));
  }
  if (kind == "adversarial") {
    return apir::StragglerModel::adversarial(
        j.at("schedule").get<std::vector<std::vector<int>>>());
  }
  throw apir::ConfigError("unknown straggler kind '" + kind + "'");
}

apir::SessionConfig parse_session_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw apir::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) {
      throw apir::ConfigError("unsupported config version");
    }
    apir::SessionConfig cfg;
    cfg.params = apir::derive_system(j.at("N").get<int>(), j.at("K").get<int>(),
                                     j.value("X", 0), j.value("T", 1),
                                     j.value("M", 1));
    cfg.framework = apir::framework_from_name(j.value("framework", "lagrange"));
    cfg.theta = j.value("theta", 0);
    cfg.file_seed = j.value("file_seed", 1ull);
    cfg.noise_seed = j.value("noise_seed", 2ull);
    cfg.model_seed = j.value("model_seed", 3ull);
    if (j.contains("q")) cfg.q_override = j.at("q").get<std::uint64_t>();
    if (j.contains("straggler")) cfg.model = parse_straggler(j.at("straggler"));
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      const std::string path = d.at("path").get<std::string>();
      const std::string format = d.value("format", "json");
      const std::uint64_t q = cfg.q_override.value_or(
          apir::smallest_prime_at_least(apir::required_field_size(cfg.params)));
      const apir::Field f(q);
      const std::string content = read_file(path);
      cfg.dataset = format == "csv"
                        ? apir::dataset_from_csv(content, cfg.params, f)
                        : apir::dataset_from_json(content, cfg.params, f);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw apir::ConfigError(std::string("config schema error: ") + e.what());
  }
}

int cmd_params(const InstanceFlags& inst) {
  const auto params = apir::derive_system(inst.n, inst.k, inst.x, inst.t, inst.m);
  const auto bound = apir::required_field_size(params);
  std::cout << "N=" << params.N << " K=" << params.K << " X=" << params.X
            << " T=" << params.T << " M=" << params.M << '\n';
  std::cout << "lambda=" << params.lambda << " P=" << params.P << '\n';
  std::cout << "gamma=[";
  for (std::size_t h = 0; h < params.gamma.size(); ++h) {
    if (h) std::cout << ',';
    std::cout << params.gamma[h];
  }
  std::cout << "]\nF=[";
  for (std::size_t h = 0; h < params.f.size(); ++h) {
    if (h) std::cout << ',';
    std::cout << params.f[h];
  }
  std::cout << "]\n";
  std::cout << "field_bound=" << bound
            << " q=" << apir::smallest_prime_at_least(bound) << '\n';
  return 0;
}

int cmd_qarray(int lambda, const std::string& format, bool verify,
               const std::string& out_path) {
  const auto arr = apir::QueryArray::build(lambda);
  std::string body =
      format == "json" ? apir::to_json(arr) + "\n" : apir::to_pretty(arr);
  std::cout << body;
  if (!out_path.empty()) write_file(out_path, body);
  if (verify) {
    const auto rep = apir::verify_conditions(arr);
    std::cout << "C0=" << (rep.c0 ? "pass" : "fail")
              << " C1=" << (rep.c1 ? "pass" : "fail")
              << " C2=" << (rep.c2 ? "pass" : "fail")
              << " C3=" << (rep.c3 ? "pass" : "fail") << '\n';
    if (!rep.all()) return 1;
  }
  return 0;
}

int cmd_certify(const InstanceFlags& inst, const std::string& framework,
                std::optional<std::uint64_t> q_flag, int trials,
                std::uint64_t seed) {
  const auto params = apir::derive_system(inst.n, inst.k, inst.x, inst.t, inst.m);
  const std::uint64_t q = q_flag.value_or(
      apir::smallest_prime_at_least(apir::required_field_size(params)));
  const auto enc = apir::select_parameters(params, q);
  const apir::BasisSet basis(apir::framework_from_name(framework), enc, params);
  const auto cert = apir::certify_framework(basis, trials, seed);
  std::cout << apir::certificate_to_json(cert) << '\n';
  return cert.all() ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& transcript_path, bool timing) {
  const auto cfg = parse_session_config(read_file(config_path));
  std::vector<apir::TranscriptEvent> transcript;
  try {
    const auto report = apir::run_session(
        cfg, transcript_path.empty() ? nullptr : &transcript);
    const std::string body = apir::session_report_to_json(report, timing) + "\n";
    std::cout << body;
    if (!out_path.empty()) write_file(out_path, body);
    if (!transcript_path.empty()) {
      write_file(transcript_path, apir::transcript_to_jsonl(transcript));
    }
    return report.decode_ok ? 0 : 1;
  } catch (const apir::DecodeExhausted& e) {
    nlohmann::json j;
    j["error"] = "DecodeExhausted";
    j["detail"] = e.what();
    std::cout << j.dump(2) << '\n';
    return 1;
  }
}

int cmd_rates(const InstanceFlags& inst, const std::string& framework,
              int trials, std::uint64_t seed, const std::string& out_path) {
  const auto params = apir::derive_system(inst.n, inst.k, inst.x, inst.t, inst.m);
  std::vector<int> s_values;
  for (int s = 0; s < params.lambda; ++s) s_values.push_back(s);
  const auto rows = apir::sweep_rates(
      params, apir::framework_from_name(framework), s_values, trials, seed);
  const std::string csv = apir::rate_table_to_csv(rows);
  std::cout << csv;
  if (!out_path.empty()) write_file(out_path, csv);
  for (const auto& row : rows) {
    if (row.success_fraction != 1.0 || row.measured_rate != row.expected_rate) {
      return 1;
    }
  }
  return 0;
}

int cmd_audit(const InstanceFlags& inst, const std::string& framework,
              const std::string& mode, std::optional<std::uint64_t> q_flag,
              int draws, std::uint64_t seed, bool sample_subsets) {
  const auto params = apir::derive_system(inst.n, inst.k, inst.x, inst.t, inst.m);
  const std::uint64_t q = q_flag.value_or(
      apir::smallest_prime_at_least(apir::required_field_size(params)));
  const auto enc = apir::select_parameters(params, q);
  const apir::BasisSet basis(apir::framework_from_name(framework), enc, params);
  const auto subset_mode =
      sample_subsets ? apir::SubsetMode::kSample : apir::SubsetMode::kAll;

  nlohmann::json j;
  bool pass = true;
  if (mode == "secrecy" || mode == "both") {
    const auto rep = apir::check_secrecy(basis, subset_mode, draws,
                                         apir::splitmix64(seed ^ 0x5ec));
    nlohmann::json s;
    s["matrices_ok"] = rep.matrices_ok;
    if (!rep.witness.empty()) s["witness"] = rep.witness;
    s["empirical_run"] = rep.empirical_run;
    if (rep.empirical_run) {
      s["groups"] = rep.groups;
      s["min_p"] = rep.min_p;
    }
    s["pass"] = rep.pass;
    j["secrecy"] = s;
    pass = pass && rep.pass;
  }
  if (mode == "privacy" || mode == "both") {
    const auto arr = apir::QueryArray::build(params.lambda);
    const auto rep = apir::check_privacy(
        basis, arr, subset_mode, draws, apir::splitmix64(seed ^ 0x9417));
    nlohmann::json s;
    s["matrices_ok"] = rep.matrices_ok;
    if (!rep.witness.empty()) s["witness"] = rep.witness;
    s["empirical_run"] = rep.empirical_run;
    if (rep.empirical_run) {
      s["coordinates"] = rep.coordinates;
      s["min_p"] = rep.min_p;
    }
    s["pass"] = rep.pass;
    j["privacy"] = s;
    pass = pass && rep.pass;
  }
  j["pass"] = pass;
  std::cout << j.dump(2) << '\n';
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive private information retrieval over X-secure K-coded storage"};
  app.require_subcommand(1);

  InstanceFlags params_inst;
  auto* params_cmd = app.add_subcommand("params", "derive system quantities");
  params_inst.add_to(params_cmd);

  int qa_lambda = 0;
  InstanceFlags qa_inst;
  std::string qa_format = "pretty";
  bool qa_verify = false;
  std::string qa_out;
  auto* qarray_cmd = app.add_subcommand("qarray", "build and inspect the query array");
  auto* qa_lambda_opt =
      qarray_cmd->add_option("--lambda", qa_lambda, "layer count lambda");
  auto* qa_n_opt = qarray_cmd->add_option("-N,--servers", qa_inst.n, "servers");
  qarray_cmd->add_option("-K,--rate", qa_inst.k, "K");
  qarray_cmd->add_option("-X,--secure", qa_inst.x, "X")->default_val(0);
  qarray_cmd->add_option("-T,--colluding", qa_inst.t, "T")->default_val(1);
  qarray_cmd->add_option("--format", qa_format, "pretty|json")
      ->check(CLI::IsMember({"pretty", "json"}));
  qarray_cmd->add_flag("--verify", qa_verify, "check conditions C0-C3");
  qarray_cmd->add_option("--out", qa_out, "also write output to this file");

  InstanceFlags cert_inst;
  std::string cert_framework = "lagrange";
  std::optional<std::uint64_t> cert_q;
  int cert_trials = 6;
  std::optional<std::uint64_t> cert_seed;
  auto* certify_cmd = app.add_subcommand("certify", "certify framework feasibility");
  cert_inst.add_to(certify_cmd);
  certify_cmd->add_option("--framework", cert_framework, "lagrange|csa")
      ->check(CLI::IsMember({"lagrange", "csa"}));
  certify_cmd->add_option("-q,--modulus", cert_q, "field modulus override");
  certify_cmd->add_option("--trials", cert_trials, "file draws per (R, d)");
  certify_cmd->add_option("--seed", cert_seed, "rng seed");

  std::string sim_config, sim_out, sim_transcript;
  bool sim_timing = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "run one PIR session");
  simulate_cmd->add_option("--config", sim_config, "JSON session config")
      ->required();
  simulate_cmd->add_option("--out", sim_out, "write the report here too");
  simulate_cmd->add_option("--transcript", sim_transcript,
                           "write line-delimited JSON delivery events");
  simulate_cmd->add_flag("--timing", sim_timing,
                         "include wall-clock time (breaks byte determinism)");

  InstanceFlags rates_inst;
  std::string rates_framework = "lagrange";
  int rates_trials = 100;
  std::optional<std::uint64_t> rates_seed;
  std::string rates_out;
  auto* rates_cmd = app.add_subcommand("rates", "measure rates per straggler count");
  rates_inst.add_to(rates_cmd);
  rates_cmd->add_option("--framework", rates_framework, "lagrange|csa")
      ->check(CLI::IsMember({"lagrange", "csa"}));
  rates_cmd->add_option("--trials", rates_trials, "sessions per S");
  rates_cmd->add_option("--seed", rates_seed, "rng seed");
  rates_cmd->add_option("--out", rates_out, "write CSV here too");

  InstanceFlags audit_inst;
  std::string audit_framework = "lagrange";
  std::string audit_mode = "both";
  std::optional<std::uint64_t> audit_q;
  int audit_draws = 10000;
  std::optional<std::uint64_t> audit_seed;
  bool audit_sample = false;
  auto* audit_cmd = app.add_subcommand("audit", "secrecy/privacy audits");
  audit_inst.add_to(audit_cmd);
  audit_cmd->add_option("--framework", audit_framework, "lagrange|csa")
      ->check(CLI::IsMember({"lagrange", "csa"}));
  audit_cmd->add_option("--mode", audit_mode, "secrecy|privacy|both")
      ->check(CLI::IsMember({"secrecy", "privacy", "both"}));
  audit_cmd->add_option("-q,--modulus", audit_q, "field modulus override");
  audit_cmd->add_option("--draws", audit_draws,
                        "empirical draws (0 = matrix checks only)");
  audit_cmd->add_option("--seed", audit_seed, "rng seed");
  audit_cmd->add_flag("--sample", audit_sample,
                      "sample server subsets instead of enumerating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (params_cmd->parsed()) return cmd_params(params_inst);
    if (qarray_cmd->parsed()) {
      int lambda = qa_lambda;
      if (!*qa_lambda_opt) {
        if (!*qa_n_opt) {
          throw apir::ConfigError("qarray needs --lambda or full -N -K [-X -T]");
        }
        lambda = apir::derive_system(qa_inst.n, qa_inst.k, qa_inst.x, qa_inst.t, 1)
                     .lambda;
      }
      return cmd_qarray(lambda, qa_format, qa_verify, qa_out);
    }
    if (certify_cmd->parsed()) {
      return cmd_certify(cert_inst, cert_framework, cert_q, cert_trials,
                         resolve_seed(cert_seed));
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(sim_config, sim_out, sim_transcript, sim_timing);
    }
    if (rates_cmd->parsed()) {
      return cmd_rates(rates_inst, rates_framework, rates_trials,
                       resolve_seed(rates_seed), rates_out);
    }
    if (audit_cmd->parsed()) {
      return cmd_audit(audit_inst, audit_framework, audit_mode, audit_q,
                       audit_draws, resolve_seed(audit_seed), audit_sample);
    }
  } catch (const apir::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const apir::InsufficientServers& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const apir::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
