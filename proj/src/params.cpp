#include "crn/params.hpp"

#include <fstream>
#include <stdexcept>

namespace crn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid scenario: " + what);
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

std::string_view to_string(SnrKnowledge k) {
  return k == SnrKnowledge::complete ? "complete" : "partial";
}

std::string_view to_string(AfFormula f) {
  return f == AfFormula::paper ? "paper" : "standard";
}

std::string_view to_string(PuReqMode m) {
  return m == PuReqMode::direct_rate ? "direct-rate" : "explicit";
}

SnrKnowledge parse_snr_knowledge(std::string_view s) {
  if (s == "complete") return SnrKnowledge::complete;
  if (s == "partial") return SnrKnowledge::partial;
  throw std::invalid_argument("unknown snr_knowledge '" + std::string(s) + "'");
}

AfFormula parse_af_formula(std::string_view s) {
  if (s == "paper") return AfFormula::paper;
  if (s == "standard") return AfFormula::standard;
  throw std::invalid_argument("unknown af_formula '" + std::string(s) + "'");
}

PuReqMode parse_pu_req_mode(std::string_view s) {
  if (s == "direct-rate") return PuReqMode::direct_rate;
  if (s == "explicit") return PuReqMode::explicit_list;
  throw std::invalid_argument("unknown pu_req_mode '" + std::string(s) + "'");
}

void ScenarioParams::validate() const {
  require(l_pu >= 1, "l_pu must be >= 1");
  require(l_su >= 1, "l_su must be >= 1");
  require(alpha > 0.0, "alpha must be > 0");
  require(t_frame > 0.0, "t_frame must be > 0");
  require(capital_c >= 0.0, "capital_c must be >= 0");
  require(c_bar >= 0.0, "c_bar must be >= 0");
  require(k_bar >= 0.0, "k_bar must be >= 0");
  require(r_su_req >= 0.0, "r_su_req must be >= 0");
  require(xi_init > 0.0 && xi_init <= 1.0, "xi_init must lie in (0, 1]");
  require(beta_init > 0.0 && beta_init <= 1.0, "beta_init must lie in (0, 1]");
  require(delta > 0.0 && delta <= xi_init, "delta must lie in (0, xi_init]");
  require(epsilon > 0.0 && epsilon <= beta_init, "epsilon must lie in (0, beta_init]");
  require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
  require(partial_expectation_samples >= 1, "partial_expectation_samples must be >= 1");
  require(std::isfinite(gamma_pu_db) && std::isfinite(gamma_su_db), "transmit SNRs must be finite");
  if (pu_req_mode == PuReqMode::explicit_list) {
    require(static_cast<int>(r_pu_req.size()) == l_pu, "r_pu_req needs exactly l_pu entries");
    for (double r : r_pu_req) require(r >= 0.0, "r_pu_req entries must be >= 0");
  }
}

static ScenarioParams parse_known_keys(const nlohmann::json& j);

ScenarioParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario config must be a JSON object");
  const nlohmann::json known = to_json(ScenarioParams{});
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  try {
    return parse_known_keys(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid scenario: ") + e.what());
  }
}

static ScenarioParams parse_known_keys(const nlohmann::json& j) {
  ScenarioParams p;
  read_key(j, "l_pu", p.l_pu);
  read_key(j, "l_su", p.l_su);
  read_key(j, "gamma_pu_db", p.gamma_pu_db);
  read_key(j, "gamma_su_db", p.gamma_su_db);
  read_key(j, "alpha", p.alpha);
  read_key(j, "t_frame", p.t_frame);
  read_key(j, "capital_c", p.capital_c);
  read_key(j, "c_bar", p.c_bar);
  read_key(j, "k_bar", p.k_bar);
  read_key(j, "r_su_req", p.r_su_req);
  read_key(j, "r_pu_req", p.r_pu_req);
  read_key(j, "xi_init", p.xi_init);
  read_key(j, "beta_init", p.beta_init);
  read_key(j, "delta", p.delta);
  read_key(j, "epsilon", p.epsilon);
  read_key(j, "tau", p.tau);
  read_key(j, "su_channel_per_band", p.su_channel_per_band);
  read_key(j, "partial_expectation_samples", p.partial_expectation_samples);
  read_key(j, "seed", p.seed);
  if (auto it = j.find("pu_req_mode"); it != j.end())
    p.pu_req_mode = parse_pu_req_mode(it->get<std::string>());
  if (auto it = j.find("snr_knowledge"); it != j.end())
    p.snr_knowledge = parse_snr_knowledge(it->get<std::string>());
  if (auto it = j.find("af_formula"); it != j.end())
    p.af_formula = parse_af_formula(it->get<std::string>());
  p.validate();
  return p;
}

nlohmann::json to_json(const ScenarioParams& p) {
  return {
      {"l_pu", p.l_pu},
      {"l_su", p.l_su},
      {"gamma_pu_db", p.gamma_pu_db},
      {"gamma_su_db", p.gamma_su_db},
      {"alpha", p.alpha},
      {"t_frame", p.t_frame},
      {"capital_c", p.capital_c},
      {"c_bar", p.c_bar},
      {"k_bar", p.k_bar},
      {"r_su_req", p.r_su_req},
      {"pu_req_mode", std::string(to_string(p.pu_req_mode))},
      {"r_pu_req", p.r_pu_req},
      {"xi_init", p.xi_init},
      {"beta_init", p.beta_init},
      {"delta", p.delta},
      {"epsilon", p.epsilon},
      {"tau", p.tau},
      {"snr_knowledge", std::string(to_string(p.snr_knowledge))},
      {"af_formula", std::string(to_string(p.af_formula))},
      {"su_channel_per_band", p.su_channel_per_band},
      {"partial_expectation_samples", p.partial_expectation_samples},
      {"seed", p.seed},
  };
}

ScenarioParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed config '" + path.string() + "': " + e.what());
  }
  return params_from_json(j);
}

}  // namespace crn
