#ifndef CRN_VERIFY_HPP
#define CRN_VERIFY_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "crn/dda.hpp"
#include "crn/errors.hpp"
#include "crn/grid.hpp"
#include "crn/market.hpp"
#include "json.hpp"

namespace crn {

/// Strict-improvement margin for blocking and dominance checks.
inline constexpr double kImprovementSlack = 1e-12;

enum class BlockReason { pu_rate, su_rate, su_utility };
std::string_view to_string(BlockReason r);

enum class Side { pu, su };

struct BlockedIndividual {
  Side side = Side::pu;
  int index = -1;
  BlockReason reason = BlockReason::pu_rate;
};

struct BlockingPair {
  int l = -1;
  int q = -1;
  Allocation witness;
};

struct StabilityReport {
  std::vector<BlockedIndividual> blocked_individuals;
  std::vector<BlockingPair> blocking_pairs;

  bool stable() const { return blocked_individuals.empty() && blocking_pairs.empty(); }
};

nlohmann::json to_json(const StabilityReport& r);

/// Utility each PU / SU holds under `outcome`; 0 when unmatched.
Eigen::VectorXd pu_utilities(const MatchingOutcome& outcome, const Market& market);
Eigen::VectorXd su_utilities(const MatchingOutcome& outcome, const Market& market);

// Individual rationality of every matched user, then a grid search over every
// cross pair for an allocation meeting all pair constraints that strictly
// improves both sides. Throws std::invalid_argument on off-grid allocations.
StabilityReport is_stable(const MatchingOutcome& outcome, const Market& market, const AllocationGrid& grid);

/// Throws GuardViolation unless L_PU, L_SU <= 3 and each grid axis has at most 6 points.
void check_enumeration_guard(const Market& market, const AllocationGrid& grid);

/// Every injective matching with every feasible grid allocation per pair.
std::vector<MatchingOutcome> enumerate_feasible_outcomes(const Market& market, const AllocationGrid& grid);

std::vector<MatchingOutcome> enumerate_stable_matchings(const Market& market, const AllocationGrid& grid);

struct DominanceCheck {
  bool holds = true;
  std::optional<MatchingOutcome> witness;
};

/// No feasible alternative gives every PU matched under `outcome` strictly more.
DominanceCheck check_weak_pareto(const MatchingOutcome& outcome, const Market& market, const AllocationGrid& grid);

/// Every PU does at least as well (within 1e-9) as in every stable matching.
DominanceCheck check_pu_optimal_among_stable(const MatchingOutcome& outcome, const Market& market,
                                             const AllocationGrid& grid);

/// Smallest beta_min over the PU's pairs, clamped into [0, beta_init].
double min_feasible_beta(const Market& market, const AllocationGrid& grid, int l);
double min_feasible_beta(const Market& market, const AllocationGrid& grid);

/// xi_init / delta + (beta_init - beta^MIN) / epsilon.
double iteration_bound(const Market& market, const AllocationGrid& grid);

/// ceil(xi_init / delta + (beta_init - beta_l^MIN) / epsilon) + 1.
long puu_bound(const Market& market, const AllocationGrid& grid, int l);

/// (L_PU + max(L_PU, L_SU)) * iteration_bound.
double packet_bound(const Market& market, const AllocationGrid& grid);

struct ComplexityEstimates {
  double centralized = 0.0;
  double proposed = 0.0;
  double rmbn = 0.0;
};

ComplexityEstimates complexity_estimates(int l_pu, int l_su);

}  // namespace crn

#endif  // CRN_VERIFY_HPP
