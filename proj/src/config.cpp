#include "magtorus/config.hpp"

namespace magtorus {

nlohmann::json RunConfig::to_json() const {
  return {{"preset", preset},
          {"lam1_coeffs", lam1_coeffs},
          {"lam2_coeffs", lam2_coeffs},
          {"ex1_lam_coeffs", ex1_lam_coeffs},
          {"ex1_u_cos", ex1_u_cos},
          {"ex1_u_sin", ex1_u_sin},
          {"K", jet_order},
          {"N_work", n_work},
          {"t", t_deform},
          {"T", horizon},
          {"tol", tol},
          {"step", step},
          {"fixed_step", fixed_step},
          {"record_dt", record_dt},
          {"drift_budget", drift_budget},
          {"k_sweep", k_sweep},
          {"energy_levels", energy_levels},
          {"M_verify", m_verify},
          {"starts", {{"nx", starts.nx}, {"nphi", starts.nphi}, {"y0", starts.y0}}},
          {"seed", seed},
          {"candidate", candidate},
          {"candidate_file", candidate_file},
          {"out_dir", out_dir}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("preset")) c = preset_config(j.at("preset").get<std::string>());
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("lam1_coeffs", c.lam1_coeffs);
  get("lam2_coeffs", c.lam2_coeffs);
  get("ex1_lam_coeffs", c.ex1_lam_coeffs);
  get("ex1_u_cos", c.ex1_u_cos);
  get("ex1_u_sin", c.ex1_u_sin);
  get("K", c.jet_order);
  get("N_work", c.n_work);
  get("t", c.t_deform);
  get("T", c.horizon);
  get("tol", c.tol);
  get("step", c.step);
  get("fixed_step", c.fixed_step);
  get("record_dt", c.record_dt);
  get("drift_budget", c.drift_budget);
  get("k_sweep", c.k_sweep);
  get("energy_levels", c.energy_levels);
  get("M_verify", c.m_verify);
  if (j.contains("starts")) {
    const auto& s = j.at("starts");
    if (s.contains("nx")) c.starts.nx = s.at("nx").get<int>();
    if (s.contains("nphi")) c.starts.nphi = s.at("nphi").get<int>();
    if (s.contains("y0")) c.starts.y0 = s.at("y0").get<double>();
  }
  get("seed", c.seed);
  get("candidate", c.candidate);
  get("candidate_file", c.candidate_file);
  get("out_dir", c.out_dir);
  c.validate();
  return c;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  auto positive_poly = [&](const std::vector<double>& coeffs, const char* name) {
    if (coeffs.empty()) fail(std::string(name) + " must not be empty");
    double lower = coeffs[0];
    for (std::size_t i = 1; i < coeffs.size(); ++i) lower -= std::abs(coeffs[i]);
    if (lower <= 0.0)
      fail(std::string(name) + " is not certainly positive (c0 - sum|ci| <= 0)");
  };
  positive_poly(lam1_coeffs, "lam1_coeffs");
  positive_poly(lam2_coeffs, "lam2_coeffs");
  positive_poly(ex1_lam_coeffs, "ex1_lam_coeffs");
  if (jet_order < 1) fail("K must be >= 1");
  if (n_work < 4) fail("N_work must be >= 4");
  if (static_cast<int>(lam1_coeffs.size()) - 1 > n_work ||
      static_cast<int>(lam2_coeffs.size()) - 1 > n_work)
    fail("N_work below the degree of the Liouville data");
  if (t_deform < 0.0) fail("t must be >= 0");
  if (horizon <= 0.0) fail("T must be > 0");
  if (tol <= 0.0) fail("tol must be > 0");
  if (step <= 0.0) fail("step must be > 0");
  if (record_dt < 0.0) fail("record_dt must be >= 0");
  if (drift_budget <= 0.0) fail("drift_budget must be > 0");
  if (m_verify < 16) fail("M_verify must be >= 16");
  if (starts.nx < 1 || starts.nphi < 1) fail("start lattice must be >= 1x1");
  for (int k : k_sweep)
    if (k < 1) fail("k_sweep entries must be >= 1");
  for (double h : energy_levels)
    if (h <= 0.0) fail("energy levels must be > 0");
  if (candidate != "liouville" && candidate != "example1" &&
      candidate != "deformed")
    fail("candidate must be liouville | example1 | deformed");
  if (out_dir.empty()) fail("out_dir must not be empty");
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "default") return c;
  if (name == "flat") {
    c.lam1_coeffs = {1.0};
    c.lam2_coeffs = {1.0};
    return c;
  }
  if (name == "example1") {
    c.candidate = "example1";
    return c;
  }
  throw ConfigError("unknown preset: " + name);
}

}  // namespace magtorus
