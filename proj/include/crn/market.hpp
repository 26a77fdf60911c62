#ifndef CRN_MARKET_HPP
#define CRN_MARKET_HPP

// The economy one matching run sees: per-pair spectral efficiencies,
// requirements and the monetary weights. Everything downstream (preference
// lists, the negotiation engine, the centralized solvers and the
// verification oracles) reads rates and utilities only through Market, so a
// partial-knowledge run and its realized-channel evaluation differ only in
// the Market they are handed.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "crn/params.hpp"
#include "crn/radio.hpp"
#include "crn/topology.hpp"

namespace crn {

/// Relative slack for rate-requirement comparisons.
inline constexpr double kRateTolerance = 1e-12;

struct Allocation {
  double xi = 0.0;
  double beta = 0.0;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct Economics {
  double t_frame = 1.0;
  double capital_c = 1.0;
  double c_bar = 1.0;
  double k_bar = 1.0;
  double relay_share = 0.5;

  static Economics from_params(const ScenarioParams& p);
};

class Market {
 public:
  Market(Eigen::MatrixXd pu_log, Eigen::MatrixXd su_log, Eigen::VectorXd pu_req,
         Eigen::VectorXd su_req, Economics econ);

  int l_pu() const { return static_cast<int>(pu_log_.rows()); }
  int l_su() const { return static_cast<int>(pu_log_.cols()); }
  const Economics& economics() const { return econ_; }

  /// L_PU x L_SU, log2(1 + Gamma_dir + Gamma_relay) as the PU sees it.
  const Eigen::MatrixXd& pu_log_gain() const { return pu_log_; }
  /// L_SU x L_PU, log2(1 + Gamma_SR).
  const Eigen::MatrixXd& su_log_gain() const { return su_log_; }
  const Eigen::VectorXd& pu_requirement() const { return pu_req_; }
  const Eigen::VectorXd& su_requirement() const { return su_req_; }

  double pu_rate(int l, int q, double beta) const {
    return beta * econ_.t_frame * econ_.relay_share * pu_log_(l, q);
  }
  double su_rate(int q, int l, double beta) const {
    return (1.0 - beta) * econ_.t_frame * su_log_(q, l);
  }
  double pu_utility(int l, int q, Allocation a) const {
    return pu_rate(l, q, a.beta) + econ_.c_bar * econ_.capital_c * a.xi;
  }
  double su_utility(int q, int l, Allocation a) const {
    return su_rate(q, l, a.beta) - econ_.k_bar * econ_.capital_c * a.xi;
  }

  bool pu_rate_ok(int l, int q, double beta) const;
  bool su_rate_ok(int q, int l, double beta) const;
  bool su_utility_ok(int q, int l, Allocation a) const;
  /// SU acceptability of an offer: rate requirement and non-negative utility.
  bool su_accepts(int q, int l, Allocation a) const {
    return su_rate_ok(q, l, a.beta) && su_utility_ok(q, l, a);
  }
  /// All pair-level constraints of the allocation problem (PU rate, SU rate,
  /// SU utility, box constraints).
  bool allocation_feasible(int l, int q, Allocation a) const;

  PairThresholds<double> thresholds(int l, int q) const;
  /// The continuous feasibility window is non-empty.
  bool pair_feasible(int l, int q) const { return thresholds(l, q).feasible(); }

  /// The 1x1 market of a single pair.
  Market submarket(int l, int q) const;

 private:
  Eigen::MatrixXd pu_log_;
  Eigen::MatrixXd su_log_;
  Eigen::VectorXd pu_req_;
  Eigen::VectorXd su_req_;
  Economics econ_;
};

/// Market with realized (instantaneous) channels on both sides.
Market realized_market(const ChannelRealization& r, const ScenarioParams& p);

/// Market as seen by the PUs under `knowledge`. Partial knowledge replaces
/// the PU spectral efficiency with its expectation over the ST->PR fading,
/// each pair using its own substream of `partial_seed`. Requirements always
/// come from the realized direct links (or the explicit list).
Market decision_market(const ChannelRealization& r, const ScenarioParams& p, SnrKnowledge knowledge,
                       std::uint64_t partial_seed);

/// Substream seed of pair (l, q) for the partial-knowledge expectation.
std::uint64_t partial_pair_seed(std::uint64_t partial_seed, int l, int q);

}  // namespace crn

#endif  // CRN_MARKET_HPP
