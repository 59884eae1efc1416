// Magnetic geodesic flow on {H = 1/2} in two formulations (angle
// parametrization and full cotangent coordinates), with drift monitoring
// of first-integral candidates along trajectories.
#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "magtorus/assembly.hpp"

namespace magtorus {

// On the level {H = 1/2}: p1 = sqrt(lam) cos(phi), p2 = sqrt(lam) sin(phi).
struct PhasePointAngle {
  double x = 0.0, y = 0.0, phi = 0.0;
};

struct PhasePointCotangent {
  double x = 0.0, y = 0.0, p1 = 0.0, p2 = 0.0;
};

enum class Scheme { AdaptiveRk45, FixedRk4 };

struct IntegratorSettings {
  double step = 1e-3;    // initial step (adaptive) or the fixed step
  double tol = 1e-10;    // local error per unit time (adaptive only)
  Scheme scheme = Scheme::AdaptiveRk45;
  double record_dt = 0.0;  // sample spacing; 0 records every accepted step
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(double t, double h);
  double t() const { return t_; }
  double h() const { return h_; }

 private:
  double t_, h_;
};

// Field evaluations along trajectories use direct spectral summation of
// the nonzero modes (exact for band-limited fields).
struct CompiledSystem {
  CompiledField lam, lam_x, lam_y, omega;
  static CompiledSystem from(const MagneticSystem& sys);
};

struct CompiledIntegral {
  CompiledField a0, a1_re, a1_im, a2;
  static CompiledIntegral from(const QuadraticIntegralOnLevel& q);
  double eval(double x, double y, double phi) const;
};

// Named scalar function of (t, state); the state pointer carries the raw
// (unfolded) coordinates of the formulation being integrated.
struct Monitor {
  std::string name;
  std::function<double(double, const double*)> fn;
};

struct Trajectory {
  int dim = 3;  // 3 = angle form (x, y, phi), 4 = cotangent form
  std::vector<double> times;
  std::vector<std::array<double, 4>> states;     // x, y folded into [0,1)
  std::vector<std::array<double, 2>> windings;   // integer winding counts
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitor_values;  // [monitor][sample]

  std::array<double, 2> unfolded_position(std::size_t i) const {
    return {states[i][0] + windings[i][0], states[i][1] + windings[i][1]};
  }
};

std::array<double, 3> angle_flow_rhs(const CompiledSystem& sys,
                                     const PhasePointAngle& p);
std::array<double, 4> hamiltonian_flow_rhs(const CompiledSystem& sys,
                                           const PhasePointCotangent& p);

Trajectory integrate(const CompiledSystem& sys, const PhasePointAngle& start,
                     double duration, const IntegratorSettings& settings,
                     std::span<const Monitor> monitors = {});
Trajectory integrate(const CompiledSystem& sys, const PhasePointCotangent& start,
                     double duration, const IntegratorSettings& settings,
                     std::span<const Monitor> monitors = {});

struct DriftStat {
  std::string name;
  double initial = 0.0;
  double max_drift = 0.0;  // max |F(t) - F(0)| over the samples
  double rel_drift = 0.0;  // max_drift / max(1, |F(0)|)
};
std::vector<DriftStat> conservation_report(const Trajectory& traj);

// Cotangent start on the level {H = h_level} matching an angle start.
PhasePointCotangent cotangent_on_level(const CompiledSystem& sys,
                                       const PhasePointAngle& p,
                                       double h_level = 0.5);

// Integrates both formulations from matched starts and returns the max
// position deviation over the common sample times.
double cross_check(const CompiledSystem& sys, const PhasePointAngle& start,
                   double duration, IntegratorSettings settings);

// Ready-made monitors.
Monitor monitor_hamiltonian(const CompiledSystem& sys);     // cotangent form
Monitor monitor_integral_angle(const CompiledIntegral& q);  // F(x,y,phi)

}  // namespace magtorus
