#include "crn/grid.hpp"

#include <algorithm>
#include <cmath>

namespace crn {

namespace {

constexpr double kSnap = 1e-9;

int step_count(double init, double step) { return static_cast<int>(std::floor(init / step + kSnap)); }

bool contains(const std::vector<double>& values, double x) {
  return std::any_of(values.begin(), values.end(), [x](double v) { return std::abs(v - x) <= kSnap; });
}

}  // namespace

AllocationGrid::AllocationGrid(double xi_init, double delta, double beta_init, double epsilon)
    : xi_init_(xi_init), delta_(delta), beta_init_(beta_init), epsilon_(epsilon) {
  // Prices stay positive: the concession rule stops lowering the price once
  // the next step would reach zero.
  for (int m = 0; m <= step_count(xi_init, delta); ++m)
    if (xi(m) > 0.0) xi_values_.push_back(xi(m));
  const int n_max = step_count(beta_init, epsilon);
  for (int n = 0; n <= n_max; ++n) beta_values_.push_back(beta(n));
  if (beta_values_.back() > 0.0) beta_values_.push_back(0.0);
}

double AllocationGrid::xi(int m) const {
  const double v = xi_init_ - m * delta_;
  return std::abs(v) <= kSnap ? 0.0 : v;
}

double AllocationGrid::beta(int n) const {
  const double v = beta_init_ - n * epsilon_;
  return v <= kSnap ? 0.0 : v;
}

bool AllocationGrid::contains_xi(double x) const { return contains(xi_values_, x); }

bool AllocationGrid::contains_beta(double b) const { return contains(beta_values_, b); }

}  // namespace crn
