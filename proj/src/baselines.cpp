#include "crn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crn {

namespace {

bool usable(const Eigen::MatrixXd& value, const Eigen::MatrixXi& allowed, int l, int q) {
  return allowed(l, q) != 0 && value(l, q) >= 0.0;
}

PairValue unfeasible(int l, int q) {
  PairValue v;
  v.l = l;
  v.q = q;
  return v;
}

PairValue evaluate(int l, int q, Allocation a, const Market& market) {
  return {l, q, true, a, market.pu_utility(l, q, a), market.su_rate(q, l, a.beta)};
}

struct Enumerator {
  const Eigen::MatrixXd& value;
  const Eigen::MatrixXi& allowed;
  std::vector<int> current;
  std::vector<bool> used;
  std::vector<int> best;
  double best_total = -1.0;

  void visit(int l, double total) {
    if (l == static_cast<int>(current.size())) {
      if (total > best_total) {
        best_total = total;
        best = current;
      }
      return;
    }
    for (int q = 0; q < static_cast<int>(used.size()); ++q) {
      if (used[q] || !usable(value, allowed, l, q)) continue;
      used[q] = true;
      current[l] = q;
      visit(l + 1, total + value(l, q));
      used[q] = false;
    }
    current[l] = -1;
    visit(l + 1, total);
  }
};

}  // namespace

PairValue pair_optimum_continuous(int l, int q, const Market& market) {
  PairValue out = unfeasible(l, q);
  const auto th = market.thresholds(l, q);
  if (!th.feasible()) return out;
  const Economics& e = market.economics();
  const double kc = e.k_bar * e.capital_c;
  const double lo = std::max(th.beta_min, 0.0);
  const double hi = std::min(th.beta_max, 1.0);

  auto price_at = [&](double beta) {
    return kc > 0.0 ? std::clamp(market.su_rate(q, l, beta) / kc, 0.0, 1.0) : 1.0;
  };
  std::vector<double> candidates{lo, hi};
  const double su_log = market.su_log_gain()(q, l);
  if (kc > 0.0 && su_log > 0.0) {
    const double knee = 1.0 - kc / (e.t_frame * su_log);
    if (knee > lo && knee < hi) candidates.push_back(knee);
  }
  std::sort(candidates.begin(), candidates.end());

  for (double beta : candidates) {
    const Allocation a{price_at(beta), beta};
    const double u = market.pu_utility(l, q, a);
    if (!out.feasible || u > out.pu_utility) out = evaluate(l, q, a, market);
  }
  return out;
}

PairValue pair_optimum_discrete(int l, int q, const Market& market, const AllocationGrid& grid) {
  PairValue out = unfeasible(l, q);
  if (!market.pair_feasible(l, q)) return out;
  for (double beta : grid.beta_values()) {
    for (double xi : grid.xi_values()) {
      const Allocation a{xi, beta};
      if (!market.allocation_feasible(l, q, a)) continue;
      const double u = market.pu_utility(l, q, a);
      if (!out.feasible || u > out.pu_utility) out = evaluate(l, q, a, market);
    }
  }
  return out;
}

double partial_matching_count(int l_pu, int l_su) {
  // sum_k C(l_pu, k) * l_su! / (l_su - k)!
  double total = 0.0;
  for (int k = 0; k <= std::min(l_pu, l_su); ++k) {
    double term = 1.0;
    for (int i = 0; i < k; ++i) term *= static_cast<double>(l_pu - i) / (i + 1) * (l_su - i);
    total += term;
  }
  return total;
}

double max_enumerated_matchings() { return partial_matching_count(8, 8); }

std::vector<int> enumerate_best_assignment(const Eigen::MatrixXd& value, const Eigen::MatrixXi& allowed) {
  const int l_pu = static_cast<int>(value.rows());
  const int l_su = static_cast<int>(value.cols());
  if (partial_matching_count(l_pu, l_su) > max_enumerated_matchings())
    throw GuardViolation("exhaustive assignment guard: " + std::to_string(l_pu) + " x " + std::to_string(l_su) +
                         " market exceeds the 8 x 8 enumeration limit");
  Enumerator e{value, allowed, std::vector<int>(l_pu, -1), std::vector<bool>(l_su, false), {}, -1.0};
  e.visit(0, 0.0);
  return e.best;
}

std::vector<int> hungarian_assignment(const Eigen::MatrixXd& value, const Eigen::MatrixXi& allowed) {
  const int l_pu = static_cast<int>(value.rows());
  const int l_su = static_cast<int>(value.cols());
  const int n = std::max(l_pu, l_su);
  std::vector<int> partner(l_pu, -1);
  if (n == 0) return partner;

  // Minimization on the padded square; 1-based potentials u, v and column owners p.
  auto cost = [&](int i, int j) {
    return (i < l_pu && j < l_su && usable(value, allowed, i, j)) ? -value(i, j) : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> done(n + 1, false);
    do {
      done[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (done[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (done[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) {
    const int i = p[j] - 1;
    const int q = j - 1;
    if (i < l_pu && q < l_su && usable(value, allowed, i, q)) partner[i] = q;
  }
  return partner;
}

double assignment_value(const std::vector<int>& partner, const Eigen::MatrixXd& value) {
  double total = 0.0;
  for (int l = 0; l < static_cast<int>(partner.size()); ++l)
    if (partner[l] >= 0) total += value(l, partner[l]);
  return total;
}

namespace {

MatchingOutcome assemble(const Market& market, const std::vector<std::vector<PairValue>>& pairs,
                         const Eigen::MatrixXd& value, bool assignment_solver) {
  Eigen::MatrixXi allowed(market.l_pu(), market.l_su());
  for (int l = 0; l < market.l_pu(); ++l)
    for (int q = 0; q < market.l_su(); ++q) allowed(l, q) = pairs[l][q].feasible ? 1 : 0;
  const std::vector<int> partner =
      assignment_solver ? hungarian_assignment(value, allowed) : enumerate_best_assignment(value, allowed);
  MatchingOutcome out = MatchingOutcome::empty(market.l_pu(), market.l_su());
  for (int l = 0; l < market.l_pu(); ++l)
    if (partner[l] >= 0) out.assign(l, partner[l], pairs[l][partner[l]].best);
  return out;
}

}  // namespace

MatchingOutcome centralized_pu_optimal(const Market& market, const CentralizedOptions& options) {
  std::vector<std::vector<PairValue>> pairs(static_cast<std::size_t>(market.l_pu()));
  Eigen::MatrixXd value = Eigen::MatrixXd::Zero(market.l_pu(), market.l_su());
  for (int l = 0; l < market.l_pu(); ++l) {
    for (int q = 0; q < market.l_su(); ++q) {
      pairs[l].push_back(options.domain == AllocationDomain::continuous
                             ? pair_optimum_continuous(l, q, market)
                             : pair_optimum_discrete(l, q, market, options.grid));
      if (pairs[l][q].feasible) value(l, q) = pairs[l][q].pu_utility;
    }
  }
  return assemble(market, pairs, value, options.assignment_solver);
}

MatchingOutcome centralized_su_rate(const Market& market, bool assignment_solver) {
  std::vector<std::vector<PairValue>> pairs(static_cast<std::size_t>(market.l_pu()));
  Eigen::MatrixXd value = Eigen::MatrixXd::Zero(market.l_pu(), market.l_su());
  for (int l = 0; l < market.l_pu(); ++l) {
    for (int q = 0; q < market.l_su(); ++q) {
      const auto th = market.thresholds(l, q);
      PairValue pv = unfeasible(l, q);
      if (th.feasible()) {
        pv = evaluate(l, q, {0.0, std::max(th.beta_min, 0.0)}, market);
        value(l, q) = pv.su_rate;
      }
      pairs[l].push_back(pv);
    }
  }
  return assemble(market, pairs, value, assignment_solver);
}

RmbnResult rmbn(const Market& market, const DdaOptions& options, RandomStream& rng) {
  const int l_pu = market.l_pu();
  const int l_su = market.l_su();
  const bool pu_smaller = l_pu <= l_su;
  std::vector<int> larger(static_cast<std::size_t>(pu_smaller ? l_su : l_pu));
  std::iota(larger.begin(), larger.end(), 0);
  for (int i = static_cast<int>(larger.size()) - 1; i > 0; --i)
    std::swap(larger[i], larger[rng.index(static_cast<std::size_t>(i) + 1)]);

  RmbnResult out{MatchingOutcome::empty(l_pu, l_su), {}};
  out.trace.puu_count.assign(static_cast<std::size_t>(l_pu), 0);
  for (int k = 0; k < std::min(l_pu, l_su); ++k) {
    const int l = pu_smaller ? k : larger[k];
    const int q = pu_smaller ? larger[k] : k;
    const DdaResult pair = run(market.submarket(l, q), options);
    if (pair.outcome.pu_partner[0] == 0) out.outcome.assign(l, q, pair.outcome.allocation_of_pu(0));
    for (TraceEvent e : pair.trace.events) {
      e.pu = e.pu >= 0 ? l : -1;
      e.su = e.su >= 0 ? q : -1;
      e.iteration += out.trace.iterations;
      out.trace.events.push_back(e);
    }
    out.trace.offers += pair.trace.offers;
    out.trace.responses += pair.trace.responses;
    out.trace.packets += pair.trace.packets;
    out.trace.iterations += pair.trace.iterations;
    out.trace.puu_count[l] += pair.trace.puu_count[0];
  }
  return out;
}

}  // namespace crn
