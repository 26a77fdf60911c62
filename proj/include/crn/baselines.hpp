#ifndef CRN_BASELINES_HPP
#define CRN_BASELINES_HPP

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "crn/dda.hpp"
#include "crn/errors.hpp"
#include "crn/grid.hpp"
#include "crn/market.hpp"
#include "crn/rng.hpp"

namespace crn {

/// Best allocation for one pair in isolation.
struct PairValue {
  int l = -1;
  int q = -1;
  bool feasible = false;
  Allocation best;
  double pu_utility = -std::numeric_limits<double>::infinity();
  double su_rate = 0.0;
};

// Continuous domain: xi is pushed to min(1, rate_su / (k_bar C)), leaving a
// piecewise-linear objective in beta whose maximum sits at a window end or at
// the breakpoint where the price cap reaches 1. Ties go to the smaller beta.
PairValue pair_optimum_continuous(int l, int q, const Market& market);

/// Exhaustive scan of the grid points satisfying every pair constraint.
PairValue pair_optimum_discrete(int l, int q, const Market& market, const AllocationGrid& grid);

enum class AllocationDomain { continuous, discrete };

/// Number of injective partial maps from l_pu PUs into l_su SUs.
double partial_matching_count(int l_pu, int l_su);

/// Largest enumeration the exact solvers accept (the 8 x 8 market).
double max_enumerated_matchings();

/// Per-PU partner (or -1) maximizing the summed value over injective
/// partial matchings. Pairs with `allowed(l, q) == 0` are never matched.
/// Enumerates lexicographically (SU 0, 1, ..., then unmatched for each PU in
/// turn) and keeps the first maximum. Throws GuardViolation above the guard.
std::vector<int> enumerate_best_assignment(const Eigen::MatrixXd& value, const Eigen::MatrixXi& allowed);

/// Same optimum total via the Hungarian method on the zero-padded square
/// matrix; works at any size. Tie-breaking may differ from enumeration.
std::vector<int> hungarian_assignment(const Eigen::MatrixXd& value, const Eigen::MatrixXi& allowed);

double assignment_value(const std::vector<int>& partner, const Eigen::MatrixXd& value);

struct CentralizedOptions {
  AllocationDomain domain = AllocationDomain::continuous;
  AllocationGrid grid{0.99, 0.05, 0.99, 0.05};  // used by the discrete domain
  bool assignment_solver = false;               // Hungarian path; lifts the size guard
};

/// Sum-of-PU-utility maximizing matching with per-pair optimal allocations.
MatchingOutcome centralized_pu_optimal(const Market& market, const CentralizedOptions& options);

/// Sum-of-SU-rate maximizing matching; each pair sits at (xi, beta) = (0, beta_min).
MatchingOutcome centralized_su_rate(const Market& market, bool assignment_solver = false);

struct RmbnResult {
  MatchingOutcome outcome;
  EngineTrace trace;
};

// Random injective matching of the smaller side onto the larger; each pair
// then negotiates alone with the concession rule (the 1 x 1 engine).
RmbnResult rmbn(const Market& market, const DdaOptions& options, RandomStream& rng);

}  // namespace crn

#endif  // CRN_BASELINES_HPP
