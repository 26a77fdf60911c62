#include "crn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crn/baselines.hpp"

namespace crn {

namespace {

constexpr std::pair<Algo, std::string_view> kAlgoNames[] = {
    {Algo::dda_complete, "dda-complete"},
    {Algo::dda_partial, "dda-partial"},
    {Algo::centralized, "centralized"},
    {Algo::centralized_discrete, "centralized-discrete"},
    {Algo::centralized_su, "centralized-su"},
    {Algo::rmbn, "rmbn"},
};

constexpr std::pair<SweepAxis, std::string_view> kAxisNames[] = {
    {SweepAxis::epsilon, "epsilon"},
    {SweepAxis::c_bar, "c_bar"},
    {SweepAxis::gamma_su_db, "gamma_su_db"},
    {SweepAxis::l_su, "l_su"},
    {SweepAxis::k_bar, "k_bar"},
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    parts.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return parts;
    start = end + 1;
  }
}

TrialMetrics measure(Algo algo, const MatchingOutcome& o, const Market& realized, long packets, long iterations,
                     std::uint64_t seed) {
  return {algo,         o.sum_pu_utility(realized), o.sum_pu_rate(realized), o.sum_su_rate(realized),
          o.matched_count(), packets,               iterations,              seed};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Algo a) {
  for (const auto& [tag, name] : kAlgoNames)
    if (tag == a) return name;
  return "?";
}

Algo parse_algo(std::string_view s) {
  for (const auto& [tag, name] : kAlgoNames)
    if (name == s) return tag;
  throw std::invalid_argument("unknown algo '" + std::string(s) + "'");
}

std::vector<Algo> parse_algo_list(std::string_view s) {
  std::vector<Algo> out;
  for (auto part : split(s, ',')) out.push_back(parse_algo(part));
  return out;
}

std::string_view to_string(SweepAxis a) {
  for (const auto& [tag, name] : kAxisNames)
    if (tag == a) return name;
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s) {
  for (const auto& [tag, name] : kAxisNames)
    if (name == s) return tag;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

double AggregateMetrics::packet_cdf(double y) const {
  if (packets_sorted.empty()) return 0.0;
  const auto it = std::upper_bound(packets_sorted.begin(), packets_sorted.end(), y,
                                   [](double v, long p) { return v < static_cast<double>(p); });
  return static_cast<double>(it - packets_sorted.begin()) / static_cast<double>(packets_sorted.size());
}

long AggregateMetrics::packet_quantile(double p) const {
  if (packets_sorted.empty()) return 0;
  const auto n = static_cast<double>(packets_sorted.size());
  const long k = std::clamp<long>(static_cast<long>(std::ceil(p * n - 1e-9)), 1, static_cast<long>(n));
  return packets_sorted[k - 1];
}

AggregateMetrics aggregate(Algo algo, int l_pu, const std::vector<TrialMetrics>& trials) {
  AggregateMetrics m;
  m.algo = algo;
  m.n_trials = static_cast<long>(trials.size());
  m.l_pu = l_pu;
  std::vector<double> u, rp, rs, mt, pk, it;
  for (const auto& t : trials) {
    u.push_back(t.sum_utility_pu);
    rp.push_back(t.sum_rate_pu);
    rs.push_back(t.sum_rate_su);
    mt.push_back(t.matched);
    pk.push_back(static_cast<double>(t.packets));
    it.push_back(static_cast<double>(t.iterations));
    m.packets_sorted.push_back(t.packets);
  }
  m.sum_utility_pu = summarize(u);
  m.sum_rate_pu = summarize(rp);
  m.sum_rate_su = summarize(rs);
  m.matched = summarize(mt);
  m.packets = summarize(pk);
  m.iterations = summarize(it);
  std::sort(m.packets_sorted.begin(), m.packets_sorted.end());
  return m;
}

std::uint64_t trial_seed(std::uint64_t seed, long index) {
  return derive_seed(seed, {static_cast<std::uint64_t>(index)});
}

TrialInstance make_trial(const ScenarioParams& params, long index) {
  const std::uint64_t seed = trial_seed(params.seed, index);
  RandomStream channel_rng(derive_seed(seed, {0}));
  return {seed, draw_realization(params, channel_rng)};
}

Market trial_market(const TrialInstance& trial, const ScenarioParams& params, SnrKnowledge knowledge) {
  return decision_market(trial.realization, params, knowledge, derive_seed(trial.seed, {1}));
}

std::vector<TrialMetrics> run_trial(const ScenarioParams& params, const std::vector<Algo>& algos, long index,
                                    const BenchOptions& options) {
  const TrialInstance trial = make_trial(params, index);
  const std::uint64_t seed = trial.seed;
  const Market realized = realized_market(trial.realization, params);
  const DdaOptions dda = DdaOptions::from_params(params, options.scope);

  std::vector<TrialMetrics> out;
  for (Algo algo : algos) {
    switch (algo) {
      case Algo::dda_complete:
      case Algo::dda_partial: {
        const auto knowledge = algo == Algo::dda_complete ? SnrKnowledge::complete : SnrKnowledge::partial;
        const DdaResult res = run(trial_market(trial, params, knowledge), dda);
        out.push_back(measure(algo, res.outcome, realized, res.trace.packets, res.trace.iterations, seed));
        break;
      }
      case Algo::centralized:
      case Algo::centralized_discrete: {
        CentralizedOptions c{algo == Algo::centralized ? AllocationDomain::continuous : AllocationDomain::discrete,
                             dda.grid, options.assignment_solver};
        out.push_back(measure(algo, centralized_pu_optimal(realized, c), realized, 0, 0, seed));
        break;
      }
      case Algo::centralized_su:
        out.push_back(measure(algo, centralized_su_rate(realized, options.assignment_solver), realized, 0, 0, seed));
        break;
      case Algo::rmbn: {
        RandomStream rng(derive_seed(seed, {2}));
        const RmbnResult res = rmbn(trial_market(trial, params, params.snr_knowledge), dda, rng);
        out.push_back(measure(algo, res.outcome, realized, res.trace.packets, res.trace.iterations, seed));
        break;
      }
    }
  }
  return out;
}

std::vector<AggregateMetrics> run_trials(const ScenarioParams& params, const std::vector<Algo>& algos, long n_trials,
                                         const BenchOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
  params.validate();
  std::vector<std::vector<TrialMetrics>> per_trial(static_cast<std::size_t>(n_trials));

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n_trials)));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long i = next++; i < n_trials; i = next++) {
      try {
        per_trial[i] = run_trial(params, algos, i, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_trials;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AggregateMetrics> out;
  for (std::size_t a = 0; a < algos.size(); ++a) {
    std::vector<TrialMetrics> column;
    for (const auto& trial : per_trial) column.push_back(trial[a]);
    out.push_back(aggregate(algos[a], params.l_pu, column));
  }
  return out;
}

ScenarioParams apply_axis(ScenarioParams params, SweepAxis axis, double value, bool tie_delta) {
  switch (axis) {
    case SweepAxis::epsilon:
      params.epsilon = value;
      if (tie_delta) params.delta = value;
      break;
    case SweepAxis::c_bar: params.c_bar = value; break;
    case SweepAxis::gamma_su_db: params.gamma_su_db = value; break;
    case SweepAxis::l_su:
      if (value != std::floor(value)) throw std::invalid_argument("l_su sweep values must be integers");
      params.l_su = static_cast<int>(value);
      break;
    case SweepAxis::k_bar: params.k_bar = value; break;
  }
  params.validate();
  return params;
}

std::vector<SweepRow> sweep(const ScenarioParams& params, SweepAxis axis, const std::vector<double>& values,
                            const std::vector<Algo>& algos, long n_trials, const BenchOptions& options,
                            bool tie_delta) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  std::vector<SweepRow> rows;
  for (double v : values)
    for (auto& m : run_trials(apply_axis(params, axis, v, tie_delta), algos, n_trials, options))
      rows.push_back({v, std::move(m)});
  return rows;
}

CsvRow csv_row(std::string scenario_id, std::string axis_name, double axis_value, const AggregateMetrics& m) {
  return {std::move(scenario_id),
          std::string(to_string(m.algo)),
          std::move(axis_name),
          axis_value,
          m.n_trials,
          m.sum_utility_pu.mean,
          m.sum_utility_pu.se,
          m.sum_rate_pu.mean,
          m.sum_rate_su.mean,
          m.match_pct(),
          m.packets.mean,
          static_cast<double>(m.packet_quantile(0.9)),
          m.iterations.mean};
}

void write_csv(const std::vector<CsvRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    for (const std::string* s : {&r.scenario_id, &r.algo, &r.axis_name})
      if (s->find_first_of(",\"\n\r") != std::string::npos)
        throw std::invalid_argument("CSV text field contains a separator: '" + *s + "'");
    out << r.scenario_id << ',' << r.algo << ',' << r.axis_name << ',' << format_number(r.axis_value) << ','
        << r.n_trials;
    for (double v : {r.mean_sum_utility_pu, r.se_sum_utility_pu, r.mean_sum_rate_pu, r.mean_sum_rate_su,
                     r.match_pct, r.mean_packets, r.p90_packets, r.mean_iterations})
      out << ',' << format_number(v);
    out << '\n';
  }
}

void emit_csv(const std::vector<CsvRow>& rows, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_csv(rows, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV to " + path.string());
  out << buffer.str();
  if (!out) throw std::runtime_error("failed writing CSV to " + path.string());
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("CSV header mismatch");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields, expected 13");
    auto num = [](std::string_view s) { return std::stod(std::string(s)); };
    rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), num(f[3]), std::stol(std::string(f[4])),
                    num(f[5]), num(f[6]), num(f[7]), num(f[8]), num(f[9]), num(f[10]), num(f[11]), num(f[12])});
  }
  return rows;
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read CSV " + path.string());
  return read_csv(in);
}

}  // namespace crn
