#include "crn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crn {

namespace {

bool improves(double candidate, double current) {
  return candidate > current + kImprovementSlack * std::max(1.0, std::abs(current));
}

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

}  // namespace

std::string_view to_string(BlockReason r) {
  switch (r) {
    case BlockReason::pu_rate: return "pu-rate";
    case BlockReason::su_rate: return "su-rate";
    case BlockReason::su_utility: return "su-utility";
  }
  return "?";
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json blocked = nlohmann::json::array();
  for (const auto& b : r.blocked_individuals)
    blocked.push_back({{"side", b.side == Side::pu ? "pu" : "su"},
                       {"index", b.index},
                       {"reason", std::string(to_string(b.reason))}});
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.blocking_pairs)
    pairs.push_back({{"l", p.l}, {"q", p.q}, {"xi", p.witness.xi}, {"beta", p.witness.beta}});
  return {{"stable", r.stable()}, {"blocked_individuals", blocked}, {"blocking_pairs", pairs}};
}

Eigen::VectorXd pu_utilities(const MatchingOutcome& outcome, const Market& market) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(market.l_pu());
  for (int l = 0; l < market.l_pu(); ++l)
    if (outcome.pu_partner[l] >= 0) u(l) = market.pu_utility(l, outcome.pu_partner[l], outcome.allocation_of_pu(l));
  return u;
}

Eigen::VectorXd su_utilities(const MatchingOutcome& outcome, const Market& market) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(market.l_su());
  for (int l = 0; l < market.l_pu(); ++l)
    if (outcome.pu_partner[l] >= 0) u(outcome.pu_partner[l]) =
        market.su_utility(outcome.pu_partner[l], l, outcome.allocation_of_pu(l));
  return u;
}

StabilityReport is_stable(const MatchingOutcome& outcome, const Market& market, const AllocationGrid& grid) {
  StabilityReport report;
  for (int l = 0; l < market.l_pu(); ++l) {
    const int q = outcome.pu_partner[l];
    if (q < 0) continue;
    const Allocation a = outcome.allocation_of_pu(l);
    if (!grid.contains_xi(a.xi) || !grid.contains_beta(a.beta))
      throw std::invalid_argument("allocation of PU " + std::to_string(l) + " is off the grid");
    if (!market.pu_rate_ok(l, q, a.beta)) report.blocked_individuals.push_back({Side::pu, l, BlockReason::pu_rate});
    if (!market.su_rate_ok(q, l, a.beta))
      report.blocked_individuals.push_back({Side::su, q, BlockReason::su_rate});
    else if (!market.su_utility_ok(q, l, a))
      report.blocked_individuals.push_back({Side::su, q, BlockReason::su_utility});
  }

  const Eigen::VectorXd pu_now = pu_utilities(outcome, market);
  const Eigen::VectorXd su_now = su_utilities(outcome, market);
  for (int l = 0; l < market.l_pu(); ++l) {
    for (int q = 0; q < market.l_su(); ++q) {
      if (outcome.pu_partner[l] == q) continue;
      bool found = false;
      for (double beta : grid.beta_values()) {
        for (double xi : grid.xi_values()) {
          const Allocation a{xi, beta};
          if (!market.allocation_feasible(l, q, a)) continue;
          if (improves(market.pu_utility(l, q, a), pu_now(l)) && improves(market.su_utility(q, l, a), su_now(q))) {
            report.blocking_pairs.push_back({l, q, a});
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
  }
  return report;
}

void check_enumeration_guard(const Market& market, const AllocationGrid& grid) {
  if (market.l_pu() > 3 || market.l_su() > 3 || grid.xi_values().size() > 6 || grid.beta_values().size() > 6)
    throw GuardViolation("enumeration guard: needs L_PU, L_SU <= 3 and at most 6 x 6 grid points");
}

namespace {

struct OutcomeEnumerator {
  const Market& market;
  std::vector<std::vector<std::vector<Allocation>>> options;  // [l][q]: feasible grid allocations
  MatchingOutcome current;
  std::vector<MatchingOutcome> out;

  void visit(int l) {
    if (l == market.l_pu()) {
      out.push_back(current);
      return;
    }
    for (int q = 0; q < market.l_su(); ++q) {
      if (current.su_partner[q] >= 0) continue;
      for (const Allocation& a : options[l][q]) {
        current.assign(l, q, a);
        visit(l + 1);
        current.match(l, q) = 0;
        current.price(l, q) = 0.0;
        current.time(l, q) = 0.0;
        current.pu_partner[l] = -1;
        current.su_partner[q] = -1;
      }
    }
    visit(l + 1);
  }
};

}  // namespace

std::vector<MatchingOutcome> enumerate_feasible_outcomes(const Market& market, const AllocationGrid& grid) {
  check_enumeration_guard(market, grid);
  OutcomeEnumerator e{market, {}, MatchingOutcome::empty(market.l_pu(), market.l_su()), {}};
  e.options.resize(static_cast<std::size_t>(market.l_pu()));
  for (int l = 0; l < market.l_pu(); ++l) {
    e.options[l].resize(static_cast<std::size_t>(market.l_su()));
    for (int q = 0; q < market.l_su(); ++q)
      for (double beta : grid.beta_values())
        for (double xi : grid.xi_values())
          if (market.allocation_feasible(l, q, {xi, beta})) e.options[l][q].push_back({xi, beta});
  }
  e.visit(0);
  return e.out;
}

std::vector<MatchingOutcome> enumerate_stable_matchings(const Market& market, const AllocationGrid& grid) {
  std::vector<MatchingOutcome> stable;
  for (auto& o : enumerate_feasible_outcomes(market, grid))
    if (is_stable(o, market, grid).stable()) stable.push_back(std::move(o));
  return stable;
}

DominanceCheck check_weak_pareto(const MatchingOutcome& outcome, const Market& market, const AllocationGrid& grid) {
  const Eigen::VectorXd mine = pu_utilities(outcome, market);
  if (outcome.matched_count() == 0) return {};
  for (auto& alt : enumerate_feasible_outcomes(market, grid)) {
    const Eigen::VectorXd theirs = pu_utilities(alt, market);
    bool all_better = true;
    for (int l = 0; l < market.l_pu() && all_better; ++l)
      if (outcome.pu_partner[l] >= 0 && !improves(theirs(l), mine(l))) all_better = false;
    if (all_better) return {false, std::move(alt)};
  }
  return {};
}

DominanceCheck check_pu_optimal_among_stable(const MatchingOutcome& outcome, const Market& market,
                                             const AllocationGrid& grid) {
  constexpr double kTolerance = 1e-9;
  const Eigen::VectorXd mine = pu_utilities(outcome, market);
  for (auto& alt : enumerate_stable_matchings(market, grid)) {
    const Eigen::VectorXd theirs = pu_utilities(alt, market);
    for (int l = 0; l < market.l_pu(); ++l)
      if (outcome.pu_partner[l] >= 0 && theirs(l) > mine(l) + kTolerance) return {false, std::move(alt)};
  }
  return {};
}

double min_feasible_beta(const Market& market, const AllocationGrid& grid, int l) {
  double lo = std::numeric_limits<double>::infinity();
  for (int q = 0; q < market.l_su(); ++q) lo = std::min(lo, market.thresholds(l, q).beta_min);
  return std::clamp(lo, 0.0, grid.beta_init());
}

double min_feasible_beta(const Market& market, const AllocationGrid& grid) {
  double lo = grid.beta_init();
  for (int l = 0; l < market.l_pu(); ++l) lo = std::min(lo, min_feasible_beta(market, grid, l));
  return lo;
}

double iteration_bound(const Market& market, const AllocationGrid& grid) {
  return grid.xi_init() / grid.delta() + (grid.beta_init() - min_feasible_beta(market, grid)) / grid.epsilon();
}

long puu_bound(const Market& market, const AllocationGrid& grid, int l) {
  const double raw =
      grid.xi_init() / grid.delta() + (grid.beta_init() - min_feasible_beta(market, grid, l)) / grid.epsilon();
  return static_cast<long>(std::ceil(raw - 1e-9)) + 1;
}

double packet_bound(const Market& market, const AllocationGrid& grid) {
  return (market.l_pu() + std::max(market.l_pu(), market.l_su())) * iteration_bound(market, grid);
}

ComplexityEstimates complexity_estimates(int l_pu, int l_su) {
  ComplexityEstimates c;
  c.centralized = l_su >= l_pu ? falling_factorial(l_su, l_pu) * std::ldexp(1.0, 2 * l_su + l_pu)
                               : falling_factorial(l_pu, l_su) * std::ldexp(1.0, 2 * l_pu + l_su);
  c.proposed = static_cast<double>(l_pu) * l_su;
  c.rmbn = l_pu;
  return c;
}

}  // namespace crn
