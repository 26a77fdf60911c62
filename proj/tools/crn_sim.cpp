// crn-sim: Monte Carlo runs, parameter sweeps, property verification and the
// tiny-instance enumeration oracle for the PU/SU relay-for-spectrum market.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 guard violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crn/baselines.hpp"
#include "crn/bench.hpp"
#include "crn/dda.hpp"
#include "crn/errors.hpp"
#include "crn/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitGuard = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  long trials = 200;
  std::string out;
  std::string algo = "dda-complete,dda-partial,centralized,centralized-su,rmbn";
  std::string af_formula;
  std::string scope = "per-pair";
  int threads = 1;
  std::string scenario_id = "default";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "scenario JSON; omitted keys keep their defaults")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--af-formula", o.af_formula, "relay SNR form")->check(CLI::IsMember({"paper", "standard"}));
  cmd->add_option("--scope", o.scope, "concession scope")->check(CLI::IsMember({"per-pair", "per-pu"}));
  cmd->add_option("--threads", o.threads, "worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber);
}

crn::ScenarioParams load(const CommonOptions& o, const crn::ScenarioParams& base = {}) {
  crn::ScenarioParams p = o.config.empty() ? base : crn::load_params(o.config);
  if (o.seed) p.seed = *o.seed;
  if (!o.af_formula.empty()) p.af_formula = crn::parse_af_formula(o.af_formula);
  p.validate();
  return p;
}

crn::BenchOptions bench_options(const CommonOptions& o) {
  crn::BenchOptions b;
  b.threads = o.threads;
  b.scope = crn::parse_concession_scope(o.scope);
  return b;
}

// Writes to --out when given, stdout otherwise.
void deliver(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string csv_text(const std::vector<crn::CsvRow>& rows) {
  std::ostringstream s;
  crn::write_csv(rows, s);
  return s.str();
}

int cmd_run(const CommonOptions& o, const std::string& trace_path) {
  const crn::ScenarioParams p = load(o);
  const auto algos = crn::parse_algo_list(o.algo);
  std::vector<crn::CsvRow> rows;
  for (const auto& m : crn::run_trials(p, algos, o.trials, bench_options(o)))
    rows.push_back(crn::csv_row(o.scenario_id, "none", 0.0, m));
  if (!trace_path.empty()) {
    const crn::TrialInstance trial = crn::make_trial(p, 0);
    const crn::DdaResult res = crn::run(crn::trial_market(trial, p, p.snr_knowledge),
                                        crn::DdaOptions::from_params(p, bench_options(o).scope));
    std::ostringstream s;
    crn::write_trace_jsonl(res.trace, s);
    deliver(s.str(), trace_path);
  }
  deliver(csv_text(rows), o.out);
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis, const std::vector<double>& values, bool untie) {
  const crn::ScenarioParams p = load(o);
  const crn::SweepAxis a = crn::parse_sweep_axis(axis);
  std::vector<crn::CsvRow> rows;
  for (const auto& r : crn::sweep(p, a, values, crn::parse_algo_list(o.algo), o.trials, bench_options(o), !untie))
    rows.push_back(crn::csv_row(o.scenario_id, axis, r.axis_value, r.metrics));
  deliver(csv_text(rows), o.out);
  return kExitOk;
}

int cmd_verify(const CommonOptions& o) {
  const crn::ScenarioParams p = load(o);
  const crn::DdaOptions dda = crn::DdaOptions::from_params(p, bench_options(o).scope);
  nlohmann::json failures = nlohmann::json::array();
  long unstable = 0, puu_over = 0, packets_over = 0;
  for (long i = 0; i < o.trials; ++i) {
    const crn::TrialInstance trial = crn::make_trial(p, i);
    const crn::Market market = crn::trial_market(trial, p, p.snr_knowledge);
    const crn::DdaResult res = crn::run(market, dda);
    const crn::StabilityReport report = crn::is_stable(res.outcome, market, dda.grid);
    nlohmann::json puu = nlohmann::json::array();
    bool puu_ok = true;
    for (int l = 0; l < market.l_pu(); ++l) {
      const long bound = crn::puu_bound(market, dda.grid, l);
      puu.push_back({{"count", res.trace.puu_count[l]}, {"bound", bound}});
      puu_ok = puu_ok && res.trace.puu_count[l] <= bound;
    }
    const double pkt_bound = crn::packet_bound(market, dda.grid);
    const bool pkt_ok = static_cast<double>(res.trace.packets) <= pkt_bound;
    unstable += report.stable() ? 0 : 1;
    puu_over += puu_ok ? 0 : 1;
    packets_over += pkt_ok ? 0 : 1;
    if (!report.stable() || !puu_ok || !pkt_ok)
      failures.push_back({{"trial", i},
                          {"stability", crn::to_json(report)},
                          {"puu", puu},
                          {"packets", res.trace.packets},
                          {"packet_bound", pkt_bound}});
  }
  const bool pass = failures.empty();
  const nlohmann::json summary = {{"instances", o.trials},
                                  {"scope", o.scope},
                                  {"unstable", unstable},
                                  {"puu_bound_violations", puu_over},
                                  {"packet_bound_violations", packets_over},
                                  {"pass", pass},
                                  {"failures", failures}};
  deliver(summary.dump(2) + "\n", o.out);
  return pass ? kExitOk : kExitVerification;
}

int cmd_oracle(const CommonOptions& o) {
  crn::ScenarioParams tiny;
  tiny.xi_init = tiny.beta_init = 1.0;
  tiny.delta = tiny.epsilon = 0.25;
  const crn::ScenarioParams p = load(o, tiny);
  const crn::DdaOptions dda = crn::DdaOptions::from_params(p, bench_options(o).scope);
  long stability = 0, optimality = 0, pareto = 0, solvers = 0;
  for (long i = 0; i < o.trials; ++i) {
    const crn::TrialInstance trial = crn::make_trial(p, i);
    const crn::Market market = crn::trial_market(trial, p, p.snr_knowledge);
    const crn::DdaResult res = crn::run(market, dda);
    stability += crn::is_stable(res.outcome, market, dda.grid).stable() ? 0 : 1;
    optimality += crn::check_pu_optimal_among_stable(res.outcome, market, dda.grid).holds ? 0 : 1;
    pareto += crn::check_weak_pareto(res.outcome, market, dda.grid).holds ? 0 : 1;

    const crn::Market realized = crn::realized_market(trial.realization, p);
    crn::CentralizedOptions c{crn::AllocationDomain::discrete, dda.grid, false};
    const double by_enumeration = crn::centralized_pu_optimal(realized, c).sum_pu_utility(realized);
    c.assignment_solver = true;
    const double by_hungarian = crn::centralized_pu_optimal(realized, c).sum_pu_utility(realized);
    solvers += std::abs(by_enumeration - by_hungarian) <= 1e-9 * std::max(1.0, by_enumeration) ? 0 : 1;
  }
  const bool pass = stability == 0 && optimality == 0 && pareto == 0 && solvers == 0;
  const nlohmann::json summary = {{"instances", o.trials},
                                  {"unstable", stability},
                                  {"pu_optimality_violations", optimality},
                                  {"weak_pareto_violations", pareto},
                                  {"assignment_solver_disagreements", solvers},
                                  {"pass", pass}};
  deliver(summary.dump(2) + "\n", o.out);
  return pass ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crn-sim: negotiation-based spectrum sharing simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, verify_opts, oracle_opts;
  std::string trace_path, axis;
  std::vector<double> values;
  bool untie = false;

  auto* run = app.add_subcommand("run", "Monte Carlo trials of one scenario -> CSV");
  add_common(run, run_opts);
  run->add_option("--algo", run_opts.algo, "comma-separated algo tags");
  run->add_option("--scenario-id", run_opts.scenario_id, "scenario_id column value");
  run->add_option("--trace", trace_path, "JSONL event log of the first trial's negotiation");

  auto* sweep = app.add_subcommand("sweep", "one CSV row per (axis value, algo)");
  add_common(sweep, sweep_opts);
  sweep->add_option("--algo", sweep_opts.algo, "comma-separated algo tags");
  sweep->add_option("--scenario-id", sweep_opts.scenario_id, "scenario_id column value");
  sweep->add_option("--axis", axis, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"epsilon", "c_bar", "gamma_su_db", "l_su", "k_bar"}));
  sweep->add_option("--values", values, "comma-separated axis values")->required()->delimiter(',');
  sweep->add_flag("--untie-delta", untie, "keep delta fixed on an epsilon sweep");

  auto* verify = app.add_subcommand("verify", "stability and bound checks on every trial; exit 2 on violation");
  add_common(verify, verify_opts);

  auto* oracle = app.add_subcommand("oracle", "brute-force enumeration suite on tiny instances; exit 2 on violation");
  add_common(oracle, oracle_opts);
  oracle_opts.trials = 50;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts, trace_path);
    if (*sweep) return cmd_sweep(sweep_opts, axis, values, untie);
    if (*verify) return cmd_verify(verify_opts);
    if (*oracle) return cmd_oracle(oracle_opts);
  } catch (const crn::GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
