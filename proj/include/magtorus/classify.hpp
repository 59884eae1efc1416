// Example-1 oracle system and the all-levels integrability checker for
// quadratic candidates F2 = a0 p1^2 + 2 a1 p1 p2 + a2 p2^2 + b0 p1 + b1 p2 + c0.
//
// The nine residual equations are re-derived from the magnetic bracket
// {F2, H}_mg = 0 by collecting momentum monomials (degree 3, 2, 1), so the
// checker accepts any gauge of the candidate. See classify.cpp for the
// derivation note and how the equations reduce to the usual normalized
// forms when a1 == 0 and a0 - a2 == 4.
#pragma once

#include "magtorus/dynamics.hpp"
#include "magtorus/trig1d.hpp"

namespace magtorus {

struct ExampleOneData {
  CosPoly1D lam_y;  // metric factor, function of y only, positive
  TrigPoly1D u_y;   // magnetic potential: Omega = -u'(y)
};

// Metric Lam(y), magnetic density -u'(y); F1 = p1 + u(y) is conserved on
// every energy level.
struct ExampleOneSystem {
  MagneticSystem system;
  TrigPoly1D u;
  double linear_integral(double y, double p1) const { return p1 + u.eval(y); }
  Monitor monitor() const;  // cotangent-form F1 monitor
};

ExampleOneSystem example_one_system(const ExampleOneData& d, int n_work = 16);

struct AllLevelsQuadratic {
  Field2 a0, a1, a2;  // momentum-quadratic coefficients
  Field2 b0, b1;      // momentum-linear coefficients
  Field2 c0;
};

inline constexpr std::array<const char*, 9> kResidualNames = {
    "a1", "a2", "a3", "a4", "b1p", "b2p", "b3", "c1", "c2"};

struct ResidualBundle {
  std::array<Field2, 9> fields;
  std::array<ResidualNorms, 9> norms;
  double worst_max() const;
};

ResidualBundle all_levels_residuals(const MagneticSystem& sys,
                                    const AllLevelsQuadratic& q,
                                    int grid_m = 128);

// Grid statistics of fg and c0 + (g^2 - f^2)/4 (f = b0/2, g = -b1/2).
// Both are constant for genuine all-levels integrals in the normalized
// gauge a0 - a2 == 4.
struct ConsequenceReport {
  double fg_mean = 0.0, fg_variance = 0.0;
  double k1_mean = 0.0, k1_variance = 0.0;
};
ConsequenceReport proof_consequence_checks(const MagneticSystem& sys,
                                           const AllLevelsQuadratic& q,
                                           int grid_m = 128);

// -- bundled candidates --------------------------------------------------

// The classical Liouville quadratic integral of lam = Lam1(x) + Lam2(y):
// a0 = Lam2/lam, a2 = -Lam1/lam, everything else zero.
AllLevelsQuadratic liouville_candidate(const LiouvilleData& data,
                                       int band = 40, int grid_m = 128);

// alpha*F1^2 + beta*H + gamma for the Example-1 system. alpha = 4 is the
// normalized gauge where the consequence checks are constant.
AllLevelsQuadratic example_one_candidate(const ExampleOneData& d,
                                         double alpha = 4.0, double beta = 2.0,
                                         double gamma = 0.0, int band = 40,
                                         int grid_m = 128);

// The deformed one-level integral packaged as a momentum polynomial:
// on {H = 1/2}, F = u0 + 2 f p1 - 2 g p2 + 2 p1^2 - 2 p2^2.
AllLevelsQuadratic one_level_candidate(const StateU& u);

// -- off-level evaluation -------------------------------------------------

struct CompiledQuadratic {
  CompiledField a0, a1, a2, b0, b1, c0;
  static CompiledQuadratic from(const AllLevelsQuadratic& q);
  double eval(double x, double y, double p1, double p2) const;
};

Monitor monitor_quadratic_cotangent(const CompiledQuadratic& q);

struct EnergyDrift {
  double h_level = 0.0;
  double rel_drift = 0.0;
  double h_rel_drift = 0.0;
};
std::vector<EnergyDrift> quadratic_drift_by_energy(
    const CompiledSystem& sys, const CompiledQuadratic& q,
    const PhasePointAngle& start, std::span<const double> levels,
    double duration, const IntegratorSettings& settings);

}  // namespace magtorus
