#include "crn/market.hpp"

#include <cmath>
#include <stdexcept>

namespace crn {

namespace {

bool at_least(double value, double floor) {
  return value >= floor - kRateTolerance * std::max(1.0, std::abs(floor));
}

}  // namespace

Economics Economics::from_params(const ScenarioParams& p) {
  return {p.t_frame, p.capital_c, p.c_bar, p.k_bar, p.relay_share()};
}

Market::Market(Eigen::MatrixXd pu_log, Eigen::MatrixXd su_log, Eigen::VectorXd pu_req,
               Eigen::VectorXd su_req, Economics econ)
    : pu_log_(std::move(pu_log)),
      su_log_(std::move(su_log)),
      pu_req_(std::move(pu_req)),
      su_req_(std::move(su_req)),
      econ_(econ) {
  if (su_log_.rows() != pu_log_.cols() || su_log_.cols() != pu_log_.rows() ||
      pu_req_.size() != pu_log_.rows() || su_req_.size() != pu_log_.cols())
    throw std::invalid_argument("market dimensions disagree");
}

bool Market::pu_rate_ok(int l, int q, double beta) const {
  return at_least(pu_rate(l, q, beta), pu_req_(l));
}

bool Market::su_rate_ok(int q, int l, double beta) const {
  return at_least(su_rate(q, l, beta), su_req_(q));
}

bool Market::su_utility_ok(int q, int l, Allocation a) const {
  return at_least(su_utility(q, l, a), 0.0);
}

bool Market::allocation_feasible(int l, int q, Allocation a) const {
  return a.xi >= 0.0 && a.xi <= 1.0 && a.beta >= 0.0 && a.beta <= 1.0 && pu_rate_ok(l, q, a.beta) &&
         su_accepts(q, l, a);
}

PairThresholds<double> Market::thresholds(int l, int q) const {
  ScenarioParams p;
  p.t_frame = econ_.t_frame;
  p.tau = econ_.relay_share;
  return pair_thresholds(pu_log_(l, q), su_log_(q, l), pu_req_(l), su_req_(q), p);
}

Market Market::submarket(int l, int q) const {
  Eigen::MatrixXd pu(1, 1), su(1, 1);
  pu(0, 0) = pu_log_(l, q);
  su(0, 0) = su_log_(q, l);
  Eigen::VectorXd pr(1), sr(1);
  pr(0) = pu_req_(l);
  sr(0) = su_req_(q);
  return Market(pu, su, pr, sr, econ_);
}

std::uint64_t partial_pair_seed(std::uint64_t partial_seed, int l, int q) {
  return derive_seed(partial_seed, {static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(q)});
}

Market realized_market(const ChannelRealization& r, const ScenarioParams& p) {
  return decision_market(r, p, SnrKnowledge::complete, 0);
}

Market decision_market(const ChannelRealization& r, const ScenarioParams& p, SnrKnowledge knowledge,
                       std::uint64_t partial_seed) {
  const auto& s = r.snr;
  const Eigen::Index l_pu = s.l_pu();
  const Eigen::Index l_su = s.l_su();
  Eigen::MatrixXd pu_log(l_pu, l_su);
  for (Eigen::Index l = 0; l < l_pu; ++l) {
    for (Eigen::Index q = 0; q < l_su; ++q) {
      pu_log(l, q) = knowledge == SnrKnowledge::complete
                         ? pu_log_gain(s, l, q)
                         : expected_pu_log_gain(s.gamma_dir(l), s.gamma_pt_st(l, q), s.mean_st_pr(l, q),
                                                p.af_formula, p.partial_expectation_samples,
                                                partial_pair_seed(partial_seed, static_cast<int>(l),
                                                                  static_cast<int>(q)));
    }
  }
  Eigen::MatrixXd su_log = s.gamma_sr.unaryExpr([](double g) { return log2_1p(g); });
  Eigen::VectorXd su_req = Eigen::VectorXd::Constant(l_su, p.r_su_req);
  return Market(std::move(pu_log), std::move(su_log), pu_requirements(s, p), std::move(su_req),
                Economics::from_params(p));
}

}  // namespace crn
