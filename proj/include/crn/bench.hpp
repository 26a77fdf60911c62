#ifndef CRN_BENCH_HPP
#define CRN_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "crn/dda.hpp"
#include "crn/market.hpp"
#include "crn/params.hpp"
#include "crn/topology.hpp"

namespace crn {

enum class Algo { dda_complete, dda_partial, centralized, centralized_discrete, centralized_su, rmbn };

std::string_view to_string(Algo a);
Algo parse_algo(std::string_view s);
/// Comma-separated list of algo tags.
std::vector<Algo> parse_algo_list(std::string_view s);

struct TrialMetrics {
  Algo algo = Algo::dda_complete;
  double sum_utility_pu = 0.0;
  double sum_rate_pu = 0.0;
  double sum_rate_su = 0.0;
  int matched = 0;
  long packets = 0;
  long iterations = 0;
  std::uint64_t seed = 0;
};

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n)
};

Summary summarize(const std::vector<double>& xs);

struct AggregateMetrics {
  Algo algo = Algo::dda_complete;
  long n_trials = 0;
  int l_pu = 0;
  Summary sum_utility_pu;
  Summary sum_rate_pu;
  Summary sum_rate_su;
  Summary matched;
  Summary packets;
  Summary iterations;
  std::vector<long> packets_sorted;

  /// Matched PUs as a percentage of L_PU.
  double match_pct() const { return l_pu > 0 ? 100.0 * matched.mean / l_pu : 0.0; }
  double match_pct_se() const { return l_pu > 0 ? 100.0 * matched.se / l_pu : 0.0; }
  /// Empirical P(packets <= y).
  double packet_cdf(double y) const;
  /// Empirical quantile sorted[ceil(p n) - 1].
  long packet_quantile(double p) const;
};

/// Fold of per-trial metrics in the given order (callers pass trial order).
AggregateMetrics aggregate(Algo algo, int l_pu, const std::vector<TrialMetrics>& trials);

struct BenchOptions {
  int threads = 1;
  ConcessionScope scope = ConcessionScope::per_pair;
  bool assignment_solver = false;  // Hungarian path for the centralized baselines
};

/// Seed of trial `index` under master seed `seed`.
std::uint64_t trial_seed(std::uint64_t seed, long index);

// One trial's world: the channel stream, the partial-knowledge expectation
// and the RMBN draw each get their own substream of the trial seed.
struct TrialInstance {
  std::uint64_t seed = 0;
  ChannelRealization realization;
};

TrialInstance make_trial(const ScenarioParams& params, long index);
/// Market the negotiating PUs see under `knowledge`.
Market trial_market(const TrialInstance& trial, const ScenarioParams& params, SnrKnowledge knowledge);

/// All requested algorithms on the realization of one trial, in `algos` order.
std::vector<TrialMetrics> run_trial(const ScenarioParams& params, const std::vector<Algo>& algos, long index,
                                    const BenchOptions& options);

/// One aggregate per algo, in `algos` order. Output is independent of the thread count.
std::vector<AggregateMetrics> run_trials(const ScenarioParams& params, const std::vector<Algo>& algos, long n_trials,
                                         const BenchOptions& options);

enum class SweepAxis { epsilon, c_bar, gamma_su_db, l_su, k_bar };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

/// `params` with the axis set to `value`; epsilon drags delta along when `tie_delta`.
ScenarioParams apply_axis(ScenarioParams params, SweepAxis axis, double value, bool tie_delta = true);

struct SweepRow {
  double axis_value = 0.0;
  AggregateMetrics metrics;
};

std::vector<SweepRow> sweep(const ScenarioParams& params, SweepAxis axis, const std::vector<double>& values,
                            const std::vector<Algo>& algos, long n_trials, const BenchOptions& options,
                            bool tie_delta = true);

struct CsvRow {
  std::string scenario_id;
  std::string algo;
  std::string axis_name;
  double axis_value = 0.0;
  long n_trials = 0;
  double mean_sum_utility_pu = 0.0;
  double se_sum_utility_pu = 0.0;
  double mean_sum_rate_pu = 0.0;
  double mean_sum_rate_su = 0.0;
  double match_pct = 0.0;
  double mean_packets = 0.0;
  double p90_packets = 0.0;
  double mean_iterations = 0.0;
  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "scenario_id,algo,axis_name,axis_value,n_trials,mean_sum_utility_pu,se_sum_utility_pu,mean_sum_rate_pu,"
    "mean_sum_rate_su,match_pct,mean_packets,p90_packets,mean_iterations";

CsvRow csv_row(std::string scenario_id, std::string axis_name, double axis_value, const AggregateMetrics& m);

/// Numbers with 9 significant digits; every line newline-terminated.
void write_csv(const std::vector<CsvRow>& rows, std::ostream& out);
void emit_csv(const std::vector<CsvRow>& rows, const std::filesystem::path& path);
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

}  // namespace crn

#endif  // CRN_BENCH_HPP
