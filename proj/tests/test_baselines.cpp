#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "crn/baselines.hpp"
#include "pair_oracle.hpp"
#include "test_support.hpp"

using namespace crn;

namespace {

struct PairCase {
  double pu_log, su_log, pu_req, su_req;
  Economics econ;
};

PairCase random_case(RandomStream& rng) {
  Economics e = test::unit_economics();
  e.c_bar = rng.uniform(0.0, 3.0);
  e.k_bar = rng.uniform(0.2, 3.0);
  return {rng.uniform(0.2, 2.0), rng.uniform(0.05, 12.0), rng.uniform(0.02, 0.5), 0.1, e};
}

Market market_of(const PairCase& c) { return test::one_pair(c.pu_log, c.su_log, c.pu_req, c.su_req, c.econ); }

Market random_market(RandomStream& rng, int l_pu, int l_su) {
  Eigen::MatrixXd pu(l_pu, l_su), su(l_su, l_pu);
  for (int l = 0; l < l_pu; ++l)
    for (int q = 0; q < l_su; ++q) pu(l, q) = rng.uniform(0.2, 2.0);
  for (int q = 0; q < l_su; ++q)
    for (int l = 0; l < l_pu; ++l) su(q, l) = rng.uniform(0.2, 12.0);
  Eigen::VectorXd req(l_pu);
  for (int l = 0; l < l_pu; ++l) req(l) = rng.uniform(0.02, 0.4);
  return test::make_market(pu, su, req);
}

}  // namespace

TEST(Baselines, ContinuousPairOptimumMatchesGridOracle) {
  RandomStream rng(41);
  int compared = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const PairCase c = random_case(rng);
    const PairValue v = pair_optimum_continuous(0, 0, market_of(c));
    const auto oracle = test::grid_oracle(test::PairProblem::of(market_of(c), 0, 0), 400);
    if (!v.feasible) {
      EXPECT_FALSE(oracle.has_value());
      continue;
    }
    EXPECT_TRUE(market_of(c).allocation_feasible(0, 0, v.best));
    ASSERT_TRUE(oracle.has_value());
    ++compared;
    EXPECT_LE(*oracle, v.pu_utility + 1e-9);
    EXPECT_NEAR(*oracle, v.pu_utility, 1e-6) << "S=" << c.pu_log << " L=" << c.su_log << " req=" << c.pu_req
                                             << " c=" << c.econ.c_bar << " k=" << c.econ.k_bar << " at (" << v.best.xi
                                             << ", " << v.best.beta << ")";
  }
  EXPECT_GT(compared, 150);
}

TEST(Baselines, ZeroPriceWeightsPushToWindowEnd) {
  // k_bar -> 0: the SU pays the full price at every beta, so beta sits at the top.
  Economics e = test::unit_economics();
  e.k_bar = 0.0;
  PairValue v = pair_optimum_continuous(0, 0, test::one_pair(1.0, 10.0, 0.1, 0.1, e));
  EXPECT_EQ(v.best.xi, 1.0);
  EXPECT_NEAR(v.best.beta, 0.99, 1e-12);

  // c_bar = 0: price is worthless to the PU, only the rate counts.
  e = test::unit_economics();
  e.c_bar = 0.0;
  v = pair_optimum_continuous(0, 0, test::one_pair(1.0, 10.0, 0.1, 0.1, e));
  EXPECT_NEAR(v.best.beta, 0.99, 1e-12);
  EXPECT_NEAR(v.pu_utility, 0.495, 1e-12);

  // Unit weights, S = 1, L = 10: the price cap reaches 1 at beta = 0.9 and
  // the price slope (10) beats the rate slope (0.5) beyond it.
  v = pair_optimum_continuous(0, 0, test::one_pair(1.0, 10.0, 0.1));
  EXPECT_NEAR(v.best.beta, 0.9, 1e-12);
  EXPECT_NEAR(v.best.xi, 1.0, 1e-12);
  EXPECT_NEAR(v.pu_utility, 1.45, 1e-12);
}

TEST(Baselines, EmptyWindowIsNeverMatched) {
  Eigen::MatrixXd pu(2, 2), su(2, 2);
  pu << 0.1, 1.0, 1.0, 1.0;  // pair (0, 0): beta_min = 4
  su << 12.0, 1.0, 1.0, 1.0;
  const Market m = test::make_market(pu, su, Eigen::VectorXd::Constant(2, 0.2));
  EXPECT_FALSE(pair_optimum_continuous(0, 0, m).feasible);
  EXPECT_FALSE(pair_optimum_discrete(0, 0, m, AllocationGrid(0.99, 0.05, 0.99, 0.05)).feasible);
  for (bool hungarian : {false, true}) {
    const MatchingOutcome o = centralized_pu_optimal(m, {AllocationDomain::continuous, {0.99, 0.05, 0.99, 0.05}, hungarian});
    EXPECT_EQ(o.match(0, 0), 0);
    EXPECT_EQ(centralized_su_rate(m, hungarian).match(0, 0), 0);
  }
}

TEST(Baselines, DiscreteNeverBeatsContinuous) {
  RandomStream rng(42);
  const AllocationGrid coarse(0.99, 0.05, 0.99, 0.05);
  const AllocationGrid fine(0.999, 1e-3, 0.999, 1e-3);
  for (int rep = 0; rep < 200; ++rep) {
    const PairCase c = random_case(rng);
    const Market m = market_of(c);
    const PairValue cont = pair_optimum_continuous(0, 0, m);
    for (const auto* g : {&coarse, &fine}) {
      const PairValue disc = pair_optimum_discrete(0, 0, m, *g);
      if (!disc.feasible) continue;
      ASSERT_TRUE(cont.feasible);
      EXPECT_LE(disc.pu_utility, cont.pu_utility + 1e-12);
    }
  }
}

TEST(Baselines, FineGridGapWithinLatticeBound) {
  // Moving from the continuous optimum to an adjacent lattice point costs at
  // most one price step, one time step of PU rate, and the price-cap drop
  // over one time step (T L eps / (k_bar C) of price, worth c_bar C each).
  ScenarioParams p;
  const double step = 1e-3;
  const AllocationGrid fine(1.0 - step, step, 1.0 - step, step);
  int compared = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Market m = realized_market(test::realization(p, seed), p);
    const Economics& e = m.economics();
    for (int l = 0; l < m.l_pu(); ++l)
      for (int q = 0; q < m.l_su(); ++q) {
        const PairValue cont = pair_optimum_continuous(l, q, m);
        const PairValue disc = pair_optimum_discrete(l, q, m, fine);
        if (!cont.feasible || !disc.feasible) continue;
        ++compared;
        const double price_value = e.c_bar * e.capital_c;
        const double bound = price_value * (e.t_frame * m.su_log_gain()(q, l) * step / (e.k_bar * e.capital_c) + step) +
                             2 * e.t_frame * e.relay_share * m.pu_log_gain()(l, q) * step;
        const double gap = cont.pu_utility - disc.pu_utility;
        EXPECT_GE(gap, -1e-12);
        EXPECT_LE(gap, bound + 1e-12) << "seed " << seed << " pair " << l << "," << q;
        worst_ratio = std::max(worst_ratio, gap / bound);
      }
  }
  EXPECT_GT(compared, 200);
  EXPECT_GT(worst_ratio, 0.5);  // the bound is not vacuous
}

TEST(Baselines, EnumerationCountsAndOptimum) {
  EXPECT_EQ(partial_matching_count(2, 3), 13.0);
  EXPECT_EQ(partial_matching_count(3, 2), 13.0);
  EXPECT_EQ(partial_matching_count(1, 1), 2.0);
  EXPECT_EQ(partial_matching_count(0, 5), 1.0);

  RandomStream rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd value(2, 3);
    Eigen::MatrixXi allowed(2, 3);
    for (int l = 0; l < 2; ++l)
      for (int q = 0; q < 3; ++q) {
        value(l, q) = rng.uniform(0.0, 2.0);
        allowed(l, q) = rng.uniform() < 0.8 ? 1 : 0;
      }
    // Oracle: the 13 partial matchings written out as partner pairs.
    int listed = 0;
    double best = 0.0;
    for (int a = -1; a < 3; ++a)
      for (int b = -1; b < 3; ++b) {
        if (a >= 0 && a == b) continue;
        ++listed;
        if ((a >= 0 && !allowed(0, a)) || (b >= 0 && !allowed(1, b))) continue;
        best = std::max(best, (a >= 0 ? value(0, a) : 0.0) + (b >= 0 ? value(1, b) : 0.0));
      }
    EXPECT_EQ(listed, 13);
    const auto partner = enumerate_best_assignment(value, allowed);
    EXPECT_NEAR(assignment_value(partner, value), best, 1e-12);
    for (int l = 0; l < 2; ++l)
      if (partner[l] >= 0) EXPECT_EQ(allowed(l, partner[l]), 1);
  }
}

TEST(Baselines, HungarianAgreesWithEnumeration) {
  RandomStream rng(44);
  for (int rep = 0; rep < 300; ++rep) {
    const int l_pu = 1 + static_cast<int>(rng.index(5));
    const int l_su = 1 + static_cast<int>(rng.index(6));
    Eigen::MatrixXd value(l_pu, l_su);
    Eigen::MatrixXi allowed(l_pu, l_su);
    for (int l = 0; l < l_pu; ++l)
      for (int q = 0; q < l_su; ++q) {
        value(l, q) = rng.uniform(0.0, 3.0);
        allowed(l, q) = rng.uniform() < 0.7 ? 1 : 0;
      }
    const auto a = enumerate_best_assignment(value, allowed);
    const auto b = hungarian_assignment(value, allowed);
    EXPECT_NEAR(assignment_value(a, value), assignment_value(b, value), 1e-9);
    std::vector<int> seen;
    for (int l = 0; l < l_pu; ++l)
      if (b[l] >= 0) {
        EXPECT_EQ(allowed(l, b[l]), 1);
        seen.push_back(b[l]);
      }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  }
}

TEST(Baselines, EnumerationGuard) {
  const Eigen::MatrixXd v9 = Eigen::MatrixXd::Ones(9, 9);
  const Eigen::MatrixXi a9 = Eigen::MatrixXi::Ones(9, 9);
  EXPECT_THROW(enumerate_best_assignment(v9, a9), GuardViolation);
  EXPECT_NEAR(assignment_value(hungarian_assignment(v9, a9), v9), 9.0, 1e-12);

  RandomStream rng(45);
  const Market m = random_market(rng, 9, 9);
  EXPECT_THROW(centralized_pu_optimal(m, {}), GuardViolation);
  EXPECT_THROW(centralized_su_rate(m), GuardViolation);
  CentralizedOptions opts;
  opts.assignment_solver = true;
  EXPECT_NO_THROW(centralized_pu_optimal(m, opts));
  EXPECT_NO_THROW(centralized_su_rate(m, true));
  EXPECT_NO_THROW(enumerate_best_assignment(Eigen::MatrixXd::Ones(2, 12), Eigen::MatrixXi::Ones(2, 12)));
}

TEST(Baselines, SuRateSolver) {
  Eigen::MatrixXd pu(2, 2), su(2, 2);
  pu << 1.0, 1.0, 1.0, 1.0;
  su << 8.0, 2.0,  // SU 0 sees band 0 at 8, band 1 at 2
      6.0, 5.0;
  const Market m = test::make_market(pu, su, Eigen::VectorXd::Constant(2, 0.1));
  // beta_min = 0.2 for every pair: rates are 0.8 * L. Best: (0,0) + (1,1) = 6.4 + 4 = 10.4
  // against (0,1) + (1,0) = 4.8 + 1.6 = 6.4.
  const MatchingOutcome o = centralized_su_rate(m);
  EXPECT_EQ(o.pu_partner, (std::vector<int>{0, 1}));
  EXPECT_NEAR(o.sum_su_rate(m), 10.4, 1e-12);
  EXPECT_EQ(o.price(0, 0), 0.0);
  EXPECT_NEAR(o.time(1, 1), 0.2, 1e-12);
  EXPECT_NEAR(centralized_su_rate(m, true).sum_su_rate(m), 10.4, 1e-12);
}

TEST(Baselines, CentralizedIsTheBestPairwiseAssignment) {
  RandomStream rng(46);
  for (int rep = 0; rep < 50; ++rep) {
    const Market m = random_market(rng, 2, 3);
    const MatchingOutcome o = centralized_pu_optimal(m, {});
    // Oracle: best over the 13 partial matchings of pairwise optima.
    double best = 0.0;
    for (int a = -1; a < 3; ++a)
      for (int b = -1; b < 3; ++b) {
        if (a >= 0 && a == b) continue;
        double t = 0.0;
        bool ok = true;
        for (auto [l, q] : {std::pair{0, a}, std::pair{1, b}}) {
          if (q < 0) continue;
          const PairValue v = pair_optimum_continuous(l, q, m);
          ok &= v.feasible;
          t += v.pu_utility;
        }
        if (ok) best = std::max(best, t);
      }
    EXPECT_NEAR(o.sum_pu_utility(m), best, 1e-12);
  }
}

TEST(Baselines, RmbnRunsTheSinglePairEngine) {
  const DdaOptions opts;
  const Market one = test::one_pair(1.0, 10.0, 0.1);
  RandomStream rng(1);
  const RmbnResult r = rmbn(one, opts, rng);
  const DdaResult d = run(one, opts);
  EXPECT_EQ(r.trace, d.trace);
  EXPECT_EQ(r.outcome.pu_partner, d.outcome.pu_partner);

  RandomStream gen(47);
  for (int rep = 0; rep < 50; ++rep) {
    const int l_pu = 1 + static_cast<int>(gen.index(4));
    const int l_su = 1 + static_cast<int>(gen.index(4));
    const Market m = random_market(gen, l_pu, l_su);
    RandomStream a(rep), b(rep);
    const RmbnResult x = rmbn(m, opts, a);
    EXPECT_EQ(x.trace, rmbn(m, opts, b).trace);
    EXPECT_EQ(x.trace.packets, 2 * x.trace.offers);
    for (int l = 0; l < l_pu; ++l) {
      const int q = x.outcome.pu_partner[l];
      if (q < 0) continue;
      const DdaResult alone = run(m.submarket(l, q), opts);
      EXPECT_EQ(alone.outcome.allocation_of_pu(0), x.outcome.allocation_of_pu(l));
    }
  }
}
