#include "magtorus/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "magtorus/classify.hpp"
#include "magtorus/io.hpp"

namespace magtorus::commands {
namespace {

using nlohmann::json;

// Verification thresholds pinned for the verify gate.
constexpr double kSystemResidualBudget = 1e-8;
constexpr double kFourierResidualBudget = 1e-8;
constexpr double kOmegaMeanBudget = 1e-13;
constexpr double kA2VarianceBudget = 1e-10;
constexpr double kClassifyResidualBudget = 1e-10;

int worker_count() {
  if (const char* env = std::getenv("MAGTORUS_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return std::min(w, 64);
  }
  return 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&fn, w, workers, n] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n;
           i += static_cast<std::size_t>(workers))
        fn(i);
    });
  for (auto& th : pool) th.join();
}

LiouvilleData liouville_data(const RunConfig& cfg) {
  return {CosPoly1D{cfg.lam1_coeffs}, CosPoly1D{cfg.lam2_coeffs}};
}

ExampleOneData example_one_data(const RunConfig& cfg) {
  ExampleOneData d;
  d.lam_y = CosPoly1D{cfg.ex1_lam_coeffs};
  d.u_y.cos_coeffs = cfg.ex1_u_cos;
  d.u_y.sin_coeffs = cfg.ex1_u_sin;
  return d;
}

StateJet build_jet(const RunConfig& cfg) {
  return ck_jet(liouville_initial_state(liouville_data(cfg), cfg.n_work),
                cfg.jet_order);
}

StateJet jet_truncated(const StateJet& jet, int order) {
  StateJet out;
  out.band_limit = jet.band_limit;
  out.discarded_mass = jet.discarded_mass;
  out.coeffs.assign(jet.coeffs.begin(), jet.coeffs.begin() + order + 1);
  return out;
}

json norms_json(const ResidualNorms& n) {
  return {{"max", n.max}, {"l2", n.l2}};
}

// Residual report of a state against both stationary formulations.
json verify_report(const StateJet& jet, const StateU& u, const RunConfig& cfg,
                   bool* pass_out) {
  const auto sys_res = system_residual(u);
  const auto fc_res = fourier_condition_residual(u, cfg.m_verify);
  const Field2 omega = magnetic_field(u);
  const QuadraticIntegralOnLevel q = assemble_integral(u);
  const Field2 a2_over_lam = divide_on_grid(q.a2, u.lam, cfg.m_verify);

  json residuals;
  bool pass = true;
  const char* names[] = {"R1", "R2", "R3", "R4"};
  for (int i = 0; i < 4; ++i) {
    const auto n = residual_norms(sys_res[static_cast<std::size_t>(i)], cfg.m_verify);
    residuals[names[i]] = norms_json(n);
    pass = pass && n.max < kSystemResidualBudget;
  }
  const char* knames[] = {"eq8_k0", "eq8_k1", "eq8_k2", "eq8_k3"};
  for (int i = 0; i < 4; ++i) {
    const auto n = residual_norms(fc_res[static_cast<std::size_t>(i)], cfg.m_verify);
    residuals[knames[i]] = norms_json(n);
    pass = pass && n.max < kFourierResidualBudget;
  }

  const double omega_mean = std::abs(mean(omega));
  const double lam_min = min_on_grid(u.lam, cfg.m_verify);
  const double a2_var = grid_variance(a2_over_lam, cfg.m_verify);
  pass = pass && omega_mean < kOmegaMeanBudget && lam_min > 0.0 &&
         a2_var < kA2VarianceBudget;
  if (pass_out) *pass_out = pass;

  return {{"t", cfg.t_deform},
          {"K", jet.order()},
          {"residual_norms", residuals},
          {"omega_mean", omega_mean},
          {"lam_min", lam_min},
          {"a2_over_lam_variance", a2_var},
          {"discarded_mass", jet.discarded_mass},
          {"tail_term", jet_tail_term(jet, cfg.t_deform)},
          {"thresholds",
           {{"system_residual_max", kSystemResidualBudget},
            {"fourier_residual_max", kFourierResidualBudget},
            {"omega_mean", kOmegaMeanBudget},
            {"a2_over_lam_variance", kA2VarianceBudget}}},
          {"pass", pass}};
}

int fail_numeric(RunDirectory& rd, const RunConfig& cfg, const json& detail) {
  rd.write_json("error.json", detail);
  rd.finalize(cfg.to_json());
  return 3;
}

std::vector<PhasePointAngle> lattice_starts(const RunConfig& cfg) {
  std::vector<PhasePointAngle> starts;
  for (int i = 0; i < cfg.starts.nx; ++i)
    for (int j = 0; j < cfg.starts.nphi; ++j)
      starts.push_back({static_cast<double>(i) / cfg.starts.nx, cfg.starts.y0,
                        kTwoPi * static_cast<double>(j) / cfg.starts.nphi});
  return starts;
}

IntegratorSettings settings_from(const RunConfig& cfg) {
  IntegratorSettings s;
  s.step = cfg.step;
  s.tol = cfg.tol;
  s.scheme = cfg.fixed_step ? Scheme::FixedRk4 : Scheme::AdaptiveRk45;
  s.record_dt = cfg.record_dt;
  return s;
}

json candidate_to_json(const MagneticSystem& sys, const AllLevelsQuadratic& q,
                       int band_limit) {
  return {{"band_limit", band_limit},
          {"lam", spectrum_to_json(sys.lam)},
          {"omega", spectrum_to_json(sys.omega)},
          {"a0", spectrum_to_json(q.a0)},
          {"a1", spectrum_to_json(q.a1)},
          {"a2", spectrum_to_json(q.a2)},
          {"b0", spectrum_to_json(q.b0)},
          {"b1", spectrum_to_json(q.b1)},
          {"c0", spectrum_to_json(q.c0)}};
}

void candidate_from_json(const json& j, MagneticSystem& sys,
                         AllLevelsQuadratic& q) {
  const int band = j.at("band_limit").get<int>();
  sys.lam = spectrum_from_json(j.at("lam"), band);
  sys.omega = spectrum_from_json(j.at("omega"), band);
  q.a0 = spectrum_from_json(j.at("a0"), band);
  q.a1 = spectrum_from_json(j.at("a1"), band);
  q.a2 = spectrum_from_json(j.at("a2"), band);
  q.b0 = spectrum_from_json(j.at("b0"), band);
  q.b1 = spectrum_from_json(j.at("b1"), band);
  q.c0 = spectrum_from_json(j.at("c0"), band);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_deform(const RunConfig& cfg) {
  RunDirectory rd(cfg.out_dir);
  try {
    const StateJet jet = build_jet(cfg);

    if (cfg.t_deform > 0.0 && !within_trust(jet, cfg.t_deform)) {
      const double t_max = max_trusted_t(jet, cfg.t_deform);
      return fail_numeric(
          rd, cfg,
          {{"error", "trust_radius"},
           {"message", "t exceeds the jet trust radius"},
           {"t", cfg.t_deform},
           {"suggested_max_t", t_max}});
    }

    const StateU u = evaluate_jet(jet, cfg.t_deform);
    const MagneticSystem sys = make_system(u);

    json jj = jet_to_json(jet);
    const JetConvergenceReport conv = jet_convergence_report(jet, cfg.t_deform);
    jj["convergence"] = {{"order_norms", conv.order_norms},
                         {"scaled_terms", conv.scaled_terms},
                         {"tail_term", conv.tail_term},
                         {"radius_estimate", conv.radius_estimate}};
    rd.write_json("jet.json", jj);

    rd.write("lam_grid.csv", grid_csv(sample(sys.lam, cfg.m_verify)));
    rd.write("omega_grid.csv", grid_csv(sample(sys.omega, cfg.m_verify)));

    bool pass = false;
    json report = verify_report(jet, u, cfg, &pass);
    const double omega_max = max_norm(sys.omega, cfg.m_verify);
    report["omega_max"] = omega_max;
    if (omega_max < 1e-12)
      report["warning"] = "flat/stationary case: magnetic field is identically zero";
    rd.write_json("verify.json", report);
    rd.finalize(cfg.to_json());
    return 0;
  } catch (const PositivityViolation& e) {
    return fail_numeric(rd, cfg,
                        {{"error", "positivity"},
                         {"message", e.what()},
                         {"x", e.x()},
                         {"y", e.y()},
                         {"value", e.value()}});
  }
}

int run_verify(const RunConfig& cfg) {
  RunDirectory rd(cfg.out_dir);
  try {
    const StateJet jet = build_jet(cfg);
    const StateU u = evaluate_jet(jet, cfg.t_deform);
    bool pass = false;
    rd.write_json("verify.json", verify_report(jet, u, cfg, &pass));
    rd.finalize(cfg.to_json());
    return pass ? 0 : 4;
  } catch (const PositivityViolation& e) {
    return fail_numeric(rd, cfg,
                        {{"error", "positivity"}, {"message", e.what()}});
  }
}

int run_simulate(const RunConfig& cfg) {
  RunDirectory rd(cfg.out_dir);
  try {
    const IntegratorSettings settings = settings_from(cfg);
    const std::vector<PhasePointAngle> starts = lattice_starts(cfg);
    json drift = {{"seed", cfg.seed},
                  {"starts", json::array()},
                  {"tol", cfg.tol},
                  {"T", cfg.horizon}};

    if (cfg.preset == "example1") {
      // Example-1 oracle flow in cotangent form; F1 = p1 + u(y).
      const ExampleOneSystem ex = example_one_system(example_one_data(cfg));
      const CompiledSystem csys = CompiledSystem::from(ex.system);
      std::vector<Trajectory> trajs(starts.size());
      std::vector<std::string> errors(starts.size());
      parallel_for(starts.size(), [&](std::size_t i) {
        const Monitor monitors[] = {ex.monitor(), monitor_hamiltonian(csys)};
        try {
          trajs[i] = integrate(csys, cotangent_on_level(csys, starts[i]),
                               cfg.horizon, settings, monitors);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
      bool budget_ok = true, aborted = false;
      for (std::size_t i = 0; i < starts.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
        json entry = {{"x0", starts[i].x}, {"y0", starts[i].y}, {"phi0", starts[i].phi}};
        if (!errors[i].empty()) {
          entry["error"] = errors[i];
          aborted = true;
        } else {
          rd.write(name, trajectory_csv(trajs[i]));
          for (const auto& st : conservation_report(trajs[i])) {
            entry[st.name] = {{"initial", st.initial},
                              {"max_drift", st.max_drift},
                              {"rel_drift", st.rel_drift}};
            if (st.name == "F1") budget_ok = budget_ok && st.rel_drift < cfg.drift_budget;
          }
        }
        drift["starts"].push_back(entry);
      }
      rd.write_json("drift.json", drift);
      rd.finalize(cfg.to_json());
      return aborted ? 3 : (budget_ok ? 0 : 4);
    }

    // Deformed (or flat) metric: angle-form flow on {H = 1/2} with the
    // assembled quadratic integral as the drift monitor.
    const StateJet jet = build_jet(cfg);
    auto drift_for_order = [&](int order, bool write_csv, json* entries,
                               std::string* abort_msg) {
      const StateJet jk = jet_truncated(jet, order);
      const StateU u = evaluate_jet(jk, cfg.t_deform);
      const MagneticSystem sys = make_system(u);
      const CompiledSystem csys = CompiledSystem::from(sys);
      const CompiledIntegral cq = CompiledIntegral::from(assemble_integral(u));
      std::vector<Trajectory> trajs(starts.size());
      std::vector<std::string> errors(starts.size());
      parallel_for(starts.size(), [&](std::size_t i) {
        const Monitor monitors[] = {
            monitor_integral_angle(cq),
            {"H", [](double, const double*) { return 0.5; }}};
        try {
          trajs[i] = integrate(csys, starts[i], cfg.horizon, settings, monitors);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
      double worst = 0.0;
      for (std::size_t i = 0; i < starts.size(); ++i) {
        json entry = {{"x0", starts[i].x}, {"y0", starts[i].y}, {"phi0", starts[i].phi}};
        if (!errors[i].empty()) {
          entry["error"] = errors[i];
          if (abort_msg) *abort_msg = errors[i];
        } else {
          const auto stats = conservation_report(trajs[i]);
          for (const auto& st : stats)
            entry[st.name] = {{"initial", st.initial},
                              {"max_drift", st.max_drift},
                              {"rel_drift", st.rel_drift}};
          worst = std::max(worst, stats[0].rel_drift);
          if (write_csv) {
            char name[32];
            std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
            rd.write(name, trajectory_csv(trajs[i]));
          }
        }
        if (entries) entries->push_back(entry);
      }
      return worst;
    };

    std::string abort_msg;
    json entries = json::array();
    const double worst = drift_for_order(cfg.jet_order, true, &entries, &abort_msg);
    drift["starts"] = entries;
    drift["max_rel_drift"] = worst;

    if (cfg.t_deform > 0.0 && !cfg.k_sweep.empty()) {
      json sweep = json::array();
      std::string csv = "K,max_rel_drift\n";
      for (int k : cfg.k_sweep) {
        const int order = std::min(k, cfg.jet_order);
        const double w = order == cfg.jet_order
                             ? worst
                             : drift_for_order(order, false, nullptr, &abort_msg);
        sweep.push_back({{"K", order}, {"max_rel_drift", w}});
        csv += std::to_string(order) + "," + format_g17(w) + "\n";
      }
      drift["drift_vs_K"] = sweep;
      rd.write("drift_vs_K.csv", csv);
    }

    rd.write_json("drift.json", drift);
    rd.finalize(cfg.to_json());
    if (!abort_msg.empty()) return 3;
    return worst < cfg.drift_budget ? 0 : 4;
  } catch (const PositivityViolation& e) {
    return fail_numeric(rd, cfg,
                        {{"error", "positivity"}, {"message", e.what()}});
  } catch (const IntegrationError& e) {
    return fail_numeric(
        rd, cfg,
        {{"error", "integration"}, {"message", e.what()}, {"t", e.t()}, {"h", e.h()}});
  }
}

int run_classify_check(const RunConfig& cfg) {
  RunDirectory rd(cfg.out_dir);
  try {
    MagneticSystem sys;
    AllLevelsQuadratic q;
    std::string kind = cfg.candidate;
    if (!cfg.candidate_file.empty()) {
      kind = "file:" + cfg.candidate_file;
      candidate_from_json(json::parse(read_file(cfg.candidate_file)), sys, q);
    } else if (cfg.candidate == "liouville") {
      const LiouvilleData data = liouville_data(cfg);
      sys.lam = to_field(data.lam1, Axis::X, cfg.n_work) +
                to_field(data.lam2, Axis::Y, cfg.n_work);
      sys.omega = Field2(cfg.n_work);
      q = liouville_candidate(data);
    } else if (cfg.candidate == "example1") {
      const ExampleOneData d = example_one_data(cfg);
      sys = example_one_system(d).system;
      q = example_one_candidate(d);
    } else {  // deformed
      const StateJet jet = build_jet(cfg);
      const StateU u = evaluate_jet(jet, cfg.t_deform);
      sys = make_system(u);
      q = one_level_candidate(u);
    }

    rd.write_json("candidate.json",
                  candidate_to_json(sys, q, std::max(sys.lam.band_limit(),
                                                     q.a0.band_limit())));

    const ResidualBundle bundle = all_levels_residuals(sys, q, cfg.m_verify);
    const ConsequenceReport cons = proof_consequence_checks(sys, q, cfg.m_verify);

    json residuals;
    for (std::size_t i = 0; i < 9; ++i)
      residuals[kResidualNames[i]] = norms_json(bundle.norms[i]);

    // Per-energy conservation of the candidate along the cotangent flow.
    const CompiledSystem csys = CompiledSystem::from(sys);
    const CompiledQuadratic cq = CompiledQuadratic::from(q);
    const PhasePointAngle probe{0.2, cfg.starts.y0, 0.7};
    const auto drifts =
        quadratic_drift_by_energy(csys, cq, probe, cfg.energy_levels,
                                  cfg.horizon, settings_from(cfg));
    json drift_table = json::array();
    for (const auto& d : drifts)
      drift_table.push_back({{"H", d.h_level},
                             {"rel_drift", d.rel_drift},
                             {"H_rel_drift", d.h_rel_drift}});

    const bool pass = bundle.worst_max() < kClassifyResidualBudget;
    rd.write_json("classify_report.json",
                  {{"candidate", kind},
                   {"residual_norms", residuals},
                   {"worst_residual_max", bundle.worst_max()},
                   {"residual_budget", kClassifyResidualBudget},
                   {"consequences",
                    {{"fg_mean", cons.fg_mean},
                     {"fg_variance", cons.fg_variance},
                     {"k1_mean", cons.k1_mean},
                     {"k1_variance", cons.k1_variance}}},
                   {"energy_drifts", drift_table},
                   {"verdict", pass ? "PASS" : "FAIL"}});
    rd.finalize(cfg.to_json());
    return pass ? 0 : 4;
  } catch (const PositivityViolation& e) {
    return fail_numeric(rd, cfg,
                        {{"error", "positivity"}, {"message", e.what()}});
  }
}

int run_export_plots(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  const auto omega_path = dir / "omega_grid.csv";
  const auto drift_path = dir / "drift.json";
  if (!std::filesystem::exists(omega_path) || !std::filesystem::exists(drift_path)) {
    std::fprintf(stderr,
                 "missing artifacts in %s: run `magtorus deform` and "
                 "`magtorus simulate` into this directory first\n",
                 cfg.out_dir.c_str());
    return 2;
  }
  RunDirectory rd(cfg.out_dir);
  rd.write("omega_heatmap.csv", read_file(omega_path));

  // Unfold the recorded trajectories: consecutive folded samples are close
  // (record_dt times the speed is well under half a period), so a jump
  // > 1/2 between samples is a wrap.
  std::string unfolded = "start,t,x,y\n";
  for (std::size_t i = 0;; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) break;
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);  // header
    double wx = 0.0, wy = 0.0, px = 0.0, py = 0.0;
    bool first = true;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string cell;
      double vals[3];
      for (int c = 0; c < 3 && std::getline(row, cell, ','); ++c)
        vals[c] = std::strtod(cell.c_str(), nullptr);
      if (!first) {
        if (vals[1] - px > 0.5) wx -= 1.0;
        if (vals[1] - px < -0.5) wx += 1.0;
        if (vals[2] - py > 0.5) wy -= 1.0;
        if (vals[2] - py < -0.5) wy += 1.0;
      }
      px = vals[1];
      py = vals[2];
      first = false;
      unfolded += std::to_string(i) + "," + format_g17(vals[0]) + "," +
                  format_g17(vals[1] + wx) + "," + format_g17(vals[2] + wy) + "\n";
    }
    unfolded += "\n";  // gnuplot block separator
  }
  rd.write("trajectories_unfolded.csv", unfolded);

  const json drift = json::parse(read_file(drift_path));
  if (drift.contains("drift_vs_K")) {
    std::string csv = "K,max_rel_drift\n";
    for (const auto& row : drift.at("drift_vs_K"))
      csv += std::to_string(row.at("K").get<int>()) + "," +
             format_g17(row.at("max_rel_drift").get<double>()) + "\n";
    rd.write("drift_vs_K.csv", csv);
  }
  rd.finalize(cfg.to_json());
  return 0;
}

}  // namespace magtorus::commands
