#ifndef CRN_PARAMS_HPP
#define CRN_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace crn {

enum class SnrKnowledge { complete, partial };
enum class AfFormula { paper, standard };
enum class PuReqMode { direct_rate, explicit_list };

std::string_view to_string(SnrKnowledge k);
std::string_view to_string(AfFormula f);
std::string_view to_string(PuReqMode m);
SnrKnowledge parse_snr_knowledge(std::string_view s);
AfFormula parse_af_formula(std::string_view s);
PuReqMode parse_pu_req_mode(std::string_view s);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Global constants of one scenario. Defaults reproduce the reference
// operating point (xi_init = beta_init = 0.99, delta = epsilon = 0.05,
// alpha = 4, 5 dB / 25 dB transmit SNRs, unit weights and frame).
struct ScenarioParams {
  int l_pu = 2;
  int l_su = 2;
  double gamma_pu_db = 5.0;
  double gamma_su_db = 25.0;
  double alpha = 4.0;
  double t_frame = 1.0;
  double capital_c = 1.0;
  double c_bar = 1.0;
  double k_bar = 1.0;
  double r_su_req = 0.1;
  PuReqMode pu_req_mode = PuReqMode::direct_rate;
  std::vector<double> r_pu_req;  // used when pu_req_mode == explicit_list
  double xi_init = 0.99;
  double beta_init = 0.99;
  double delta = 0.05;
  double epsilon = 0.05;
  double tau = 0.5;
  SnrKnowledge snr_knowledge = SnrKnowledge::complete;
  AfFormula af_formula = AfFormula::paper;
  // One ST->SR fading draw per (q, band) when true, one per q otherwise.
  bool su_channel_per_band = true;
  int partial_expectation_samples = 4096;
  std::uint64_t seed = 1;

  double gamma_pu() const { return db_to_linear(gamma_pu_db); }
  double gamma_su() const { return db_to_linear(gamma_su_db); }

  // Pre-log factor of the relayed PU rate. The two-phase AF exchange
  // carries min(tau, 1 - tau) of the cooperative period, i.e. 1/2 at the
  // default tau.
  double relay_share() const { return std::min(tau, 1.0 - tau); }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

ScenarioParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioParams& p);
ScenarioParams load_params(const std::filesystem::path& path);

}  // namespace crn

#endif  // CRN_PARAMS_HPP
