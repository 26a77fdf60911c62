#ifndef CRN_RADIO_HPP
#define CRN_RADIO_HPP

// Link budget, rate and utility model of the cooperative overlay:
// received SNRs, AF relaying, PU/SU rates, utilities and feasibility
// thresholds. Header-only, templated on the scalar type.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "crn/params.hpp"
#include "crn/rng.hpp"

namespace crn {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Squared fading magnitudes |h|^2 of every link family.
template <typename Scalar>
struct ChannelGains {
  VectorX<Scalar> pt_pr;  // L_PU
  MatrixX<Scalar> pt_st;  // L_PU x L_SU
  MatrixX<Scalar> st_pr;  // L_PU x L_SU
  MatrixX<Scalar> st_sr;  // L_SU x L_PU (per band)
};

template <typename Scalar>
struct LinkDistances {
  VectorX<Scalar> pt_pr;  // L_PU
  MatrixX<Scalar> pt_st;  // L_PU x L_SU
  MatrixX<Scalar> st_pr;  // L_PU x L_SU
  VectorX<Scalar> st_sr;  // L_SU
};

template <typename Scalar>
struct LinkSnrs {
  VectorX<Scalar> gamma_dir;    // L_PU, direct PT->PR
  MatrixX<Scalar> gamma_pt_st;  // L_PU x L_SU
  MatrixX<Scalar> gamma_st_pr;  // L_PU x L_SU
  MatrixX<Scalar> gamma_relay;  // L_PU x L_SU, equivalent AF SNR at PR
  MatrixX<Scalar> gamma_sr;     // L_SU x L_PU, ST->SR in band of PU l
  MatrixX<Scalar> mean_st_pr;   // L_PU x L_SU, gamma_ST / d^alpha (no fading)

  Eigen::Index l_pu() const { return gamma_dir.size(); }
  Eigen::Index l_su() const { return gamma_sr.rows(); }
};

using LinkSnrsd = LinkSnrs<double>;
using ChannelGainsd = ChannelGains<double>;
using LinkDistancesd = LinkDistances<double>;

/// log2(1 + x), accurate for small x.
template <typename Scalar>
Scalar log2_1p(Scalar x) {
  return std::log1p(x) / std::numbers::ln2_v<Scalar>;
}

/// tx * |h|^2 / d^alpha, coefficient-wise.
template <typename G, typename D>
auto received_snr(typename G::Scalar tx_snr, const Eigen::ArrayBase<G>& gain2,
                  const Eigen::ArrayBase<D>& dist, typename G::Scalar alpha) {
  return tx_snr * gain2 / dist.pow(alpha);
}

/// Equivalent SNR of the relayed copy. The paper form is x/(x+1) with
/// x = g1*g2; the standard AF form is g1*g2/(g1+g2+1).
template <typename A, typename B>
Eigen::Array<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> relay_snr(
    const Eigen::ArrayBase<A>& g1, const Eigen::ArrayBase<B>& g2, AfFormula formula) {
  const auto product = (g1 * g2).eval();
  if (formula == AfFormula::paper) return product / (product + 1);
  return product / (g1 + g2 + 1);
}

template <std::floating_point Scalar>
Scalar relay_snr(Scalar g1, Scalar g2, AfFormula formula) {
  const Scalar product = g1 * g2;
  if (formula == AfFormula::paper) return product / (product + 1);
  return product / (g1 + g2 + 1);
}

/// Fills every SNR of one realization. Throws std::domain_error on any
/// non-finite or negative SNR (coincident users, bad inputs).
template <typename Scalar>
LinkSnrs<Scalar> compute_snrs(const ScenarioParams& params, const ChannelGains<Scalar>& gains,
                              const LinkDistances<Scalar>& dist) {
  const Scalar alpha = static_cast<Scalar>(params.alpha);
  const Scalar g_pt = static_cast<Scalar>(params.gamma_pu());
  const Scalar g_st = static_cast<Scalar>(params.gamma_su());
  const Eigen::Index l_pu = gains.pt_pr.size();
  const Eigen::Index l_su = gains.st_sr.rows();

  LinkSnrs<Scalar> s;
  s.gamma_dir = received_snr(g_pt, gains.pt_pr.array(), dist.pt_pr.array(), alpha).matrix();
  s.gamma_pt_st = received_snr(g_pt, gains.pt_st.array(), dist.pt_st.array(), alpha).matrix();
  s.mean_st_pr = (g_st / dist.st_pr.array().pow(alpha)).matrix();
  s.gamma_st_pr = (s.mean_st_pr.array() * gains.st_pr.array()).matrix();
  s.gamma_relay = relay_snr(s.gamma_pt_st.array(), s.gamma_st_pr.array(), params.af_formula).matrix();
  s.gamma_sr.resize(l_su, l_pu);
  for (Eigen::Index q = 0; q < l_su; ++q)
    s.gamma_sr.row(q) = g_st * gains.st_sr.row(q).array() / std::pow(dist.st_sr(q), alpha);

  auto finite = [](const auto& m) { return m.allFinite() && (m.array() >= 0).all(); };
  if (!finite(s.gamma_dir) || !finite(s.gamma_pt_st) || !finite(s.gamma_st_pr) ||
      !finite(s.gamma_relay) || !finite(s.gamma_sr) || !finite(s.mean_st_pr))
    throw std::domain_error("non-finite link SNR; realization rejected");
  return s;
}

/// log2(1 + Gamma_dir + Gamma_relay): the PU's cooperative spectral efficiency.
template <typename Scalar>
Scalar pu_log_gain(const LinkSnrs<Scalar>& s, Eigen::Index l, Eigen::Index q) {
  return log2_1p(s.gamma_dir(l) + s.gamma_relay(l, q));
}

template <typename Scalar>
Scalar su_log_gain(const LinkSnrs<Scalar>& s, Eigen::Index q, Eigen::Index l) {
  return log2_1p(s.gamma_sr(q, l));
}

template <typename Scalar>
Scalar rate_pu(Eigen::Index l, Eigen::Index q, Scalar beta, const LinkSnrs<Scalar>& s,
               const ScenarioParams& p) {
  return beta * static_cast<Scalar>(p.t_frame * p.relay_share()) * pu_log_gain(s, l, q);
}

template <typename Scalar>
Scalar rate_su(Eigen::Index q, Eigen::Index l, Scalar beta, const LinkSnrs<Scalar>& s,
               const ScenarioParams& p) {
  return (1 - beta) * static_cast<Scalar>(p.t_frame) * su_log_gain(s, q, l);
}

template <typename Scalar>
Scalar utility_pu(Scalar rate, Scalar xi, const ScenarioParams& p) {
  return rate + static_cast<Scalar>(p.c_bar * p.capital_c) * xi;
}

template <typename Scalar>
Scalar utility_su(Scalar rate, Scalar xi, const ScenarioParams& p) {
  return rate - static_cast<Scalar>(p.k_bar * p.capital_c) * xi;
}

template <typename Scalar>
Scalar utility_pu(Eigen::Index l, Eigen::Index q, Scalar beta, Scalar xi, const LinkSnrs<Scalar>& s,
                  const ScenarioParams& p) {
  return utility_pu(rate_pu(l, q, beta, s, p), xi, p);
}

template <typename Scalar>
Scalar utility_su(Eigen::Index q, Eigen::Index l, Scalar beta, Scalar xi, const LinkSnrs<Scalar>& s,
                  const ScenarioParams& p) {
  return utility_su(rate_su(q, l, beta, s, p), xi, p);
}

/// Rate of the unassisted PT->PR link over the whole frame.
template <typename Scalar>
Scalar direct_rate(Eigen::Index l, const LinkSnrs<Scalar>& s, const ScenarioParams& p) {
  return static_cast<Scalar>(p.t_frame) * log2_1p(s.gamma_dir(l));
}

/// Minimum PU rates for every pair: the direct-link rate or the explicit list.
template <typename Scalar>
VectorX<Scalar> pu_requirements(const LinkSnrs<Scalar>& s, const ScenarioParams& p) {
  VectorX<Scalar> req(s.l_pu());
  for (Eigen::Index l = 0; l < s.l_pu(); ++l)
    req(l) = p.pu_req_mode == PuReqMode::direct_rate ? direct_rate(l, s, p)
                                                     : static_cast<Scalar>(p.r_pu_req.at(l));
  return req;
}

/// E[log2(1 + Gamma_dir + Gamma_relay)] over the unknown ST->PR fading,
/// |h|^2 ~ Exp(1), with Gamma_dir and Gamma_PT-ST held at their instantaneous
/// values. Randomly shifted lattice on the inverse CDF: the shift is the only
/// random input, drawn from `seed`.
template <typename Scalar>
Scalar expected_pu_log_gain(Scalar gamma_dir, Scalar gamma_pt_st, Scalar mean_st_pr,
                            AfFormula formula, int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("expected rate needs at least one sample");
  RandomStream stream(seed);
  const double shift = stream.uniform();
  const double n = static_cast<double>(samples);
  Scalar acc = 0;
  for (int i = 0; i < samples; ++i) {
    const double u = (static_cast<double>(i) + shift) / n;
    const Scalar fade = static_cast<Scalar>(-std::log1p(-u));
    acc += log2_1p(gamma_dir + relay_snr(gamma_pt_st, mean_st_pr * fade, formula));
  }
  return acc / static_cast<Scalar>(samples);
}

template <typename Scalar>
Scalar expected_rate_pu(Eigen::Index l, Eigen::Index q, Scalar beta, const LinkSnrs<Scalar>& s,
                        const ScenarioParams& p, std::uint64_t seed) {
  if (p.partial_expectation_samples <= 0)
    throw std::invalid_argument("expected rate needs at least one sample");
  if (beta == 0) return 0;
  return beta * static_cast<Scalar>(p.t_frame * p.relay_share()) *
         expected_pu_log_gain(s.gamma_dir(l), s.gamma_pt_st(l, q), s.mean_st_pr(l, q), p.af_formula,
                              p.partial_expectation_samples, seed);
}

/// Feasibility window of one (PU, SU) pair in beta.
template <typename Scalar>
struct PairThresholds {
  Scalar beta_min = 0;  // smallest beta meeting the PU requirement; +inf if none
  Scalar beta_max = 0;  // largest beta meeting the SU requirement, in [0, 1]
  bool su_rate_possible = true;

  bool feasible() const { return su_rate_possible && beta_min <= std::min<Scalar>(beta_max, 1); }
};

/// Thresholds from the two spectral efficiencies. `pu_log` is whatever the
/// PU believes (instantaneous or expected) and `su_log` is log2(1+Gamma_SR).
template <typename Scalar>
PairThresholds<Scalar> pair_thresholds(Scalar pu_log, Scalar su_log, Scalar r_pu_req, Scalar r_su_req,
                                       const ScenarioParams& p) {
  PairThresholds<Scalar> t;
  const Scalar pu_scale = static_cast<Scalar>(p.t_frame * p.relay_share()) * pu_log;
  t.beta_min = pu_scale > 0 ? r_pu_req / pu_scale
                            : (r_pu_req > 0 ? std::numeric_limits<Scalar>::infinity() : Scalar(0));
  const Scalar su_scale = static_cast<Scalar>(p.t_frame) * su_log;
  if (su_scale > 0) {
    t.beta_max = std::clamp<Scalar>(1 - r_su_req / su_scale, 0, 1);
    t.su_rate_possible = r_su_req <= su_scale;
  } else {
    t.beta_max = r_su_req > 0 ? Scalar(0) : Scalar(1);
    t.su_rate_possible = r_su_req <= 0;
  }
  return t;
}

template <typename Scalar>
PairThresholds<Scalar> pair_thresholds(Eigen::Index l, Eigen::Index q, const LinkSnrs<Scalar>& s,
                                       const VectorX<Scalar>& pu_req, const ScenarioParams& p) {
  return pair_thresholds(pu_log_gain(s, l, q), su_log_gain(s, q, l), pu_req(l),
                         static_cast<Scalar>(p.r_su_req), p);
}

/// Largest price fraction the SU can pay at `su_rate` without negative utility.
template <typename Scalar>
Scalar xi_cap(Scalar su_rate, const ScenarioParams& p) {
  const Scalar kc = static_cast<Scalar>(p.k_bar * p.capital_c);
  if (kc <= 0) return 1;
  return std::clamp<Scalar>(su_rate / kc, 0, 1);
}

}  // namespace crn

#endif  // CRN_RADIO_HPP
