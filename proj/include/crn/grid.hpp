#ifndef CRN_GRID_HPP
#define CRN_GRID_HPP

#include <vector>

#include "crn/params.hpp"

namespace crn {

// Discrete allocation sets {init - m * step}. Allocations are addressed by
// integer step counts so the negotiation never drifts off the grid. Prices
// are strictly positive; the time axis runs down to 0 and carries the
// clamp-to-zero point the concession rule can reach when beta_init is not a
// multiple of epsilon.
class AllocationGrid {
 public:
  AllocationGrid(double xi_init, double delta, double beta_init, double epsilon);
  static AllocationGrid from_params(const ScenarioParams& p) {
    return AllocationGrid(p.xi_init, p.delta, p.beta_init, p.epsilon);
  }

  double xi_init() const { return xi_init_; }
  double delta() const { return delta_; }
  double beta_init() const { return beta_init_; }
  double epsilon() const { return epsilon_; }

  /// xi_init - m * delta, snapped to 0 within rounding.
  double xi(int m) const;
  /// max(beta_init - n * epsilon, 0).
  double beta(int n) const;

  const std::vector<double>& xi_values() const { return xi_values_; }
  const std::vector<double>& beta_values() const { return beta_values_; }

  bool contains_xi(double x) const;
  bool contains_beta(double b) const;

 private:
  double xi_init_, delta_, beta_init_, epsilon_;
  std::vector<double> xi_values_;
  std::vector<double> beta_values_;
};

}  // namespace crn

#endif  // CRN_GRID_HPP
