// Run configuration: one JSON file per run, validated before any
// computation. Presets: default, flat, example1.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace magtorus {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct StartLattice {
  int nx = 4;
  int nphi = 4;
  double y0 = 0.37;
};

struct RunConfig {
  std::string preset = "default";

  // Liouville data: cosine-polynomial coefficients, index = frequency.
  std::vector<double> lam1_coeffs{1.0, 0.1};
  std::vector<double> lam2_coeffs{1.0, 0.1};

  // Example-1 data (used by the example1 preset and candidates).
  std::vector<double> ex1_lam_coeffs{1.0, 0.3};
  std::vector<double> ex1_u_cos{};
  std::vector<double> ex1_u_sin{0.0, 1.0};

  int jet_order = 12;
  int n_work = 64;
  double t_deform = 0.01;

  double horizon = 20.0;
  double tol = 1e-10;
  double step = 1e-3;
  bool fixed_step = false;
  double record_dt = 0.05;
  double drift_budget = 1e-6;
  std::vector<int> k_sweep{4, 8, 12};
  std::vector<double> energy_levels{0.25, 0.5, 1.0};

  int m_verify = 128;
  StartLattice starts;
  std::uint64_t seed = 0;

  std::string candidate = "deformed";  // liouville | example1 | deformed
  std::string candidate_file;          // overrides `candidate` when set

  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;  // throws ConfigError
};

RunConfig preset_config(const std::string& name);  // throws ConfigError

}  // namespace magtorus
