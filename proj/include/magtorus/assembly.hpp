// Builds the magnetic system (lam, omega) and the on-level quadratic
// integral from a state U, and evaluates the stationary residuals that a
// genuine solution must annihilate: the 4-equation first-order system and,
// independently, the Fourier-mode conditions of the conservation equation.
#pragma once

#include <array>

#include "magtorus/jet.hpp"

namespace magtorus {

struct MagneticSystem {
  Field2 lam;    // conformal factor, positive
  Field2 omega;  // magnetic density, zero mean by construction
};

// F(x,y,phi) = a0 + 2 Re(a1 e^{i phi}) + 2 a2 cos(2 phi) with
// a1 = sqrt(lam) (f + i g) and a2 = lam.
struct QuadraticIntegralOnLevel {
  Field2 a0;
  Field2 a1_re, a1_im;
  Field2 a2;
};

// Complex-valued field as a (re, im) pair of Field2.
struct CField {
  Field2 re, im;
};

struct ResidualNorms {
  double max = 0.0;
  double l2 = 0.0;  // sqrt of the grid mean square
};

Field2 magnetic_field(const StateU& u);  // (g_x - f_y)/4
MagneticSystem make_system(const StateU& u);

// grid_m = 0 picks a dealiased grid automatically from the effective band.
QuadraticIntegralOnLevel assemble_integral(const StateU& u, int grid_m = 0);

double eval_integral(const QuadraticIntegralOnLevel& q, double x, double y,
                     double phi);

// Residuals of the stationary system, in order:
//   R1 = f_x + g_y
//   R2 = (f lam)_x - (g lam)_y
//   R3 = u0_x + 2 lam_x - g (f_y - g_x)/2
//   R4 = -u0_y + 2 lam_y + f (f_y - g_x)/2
std::array<Field2, 4> system_residual(const StateU& u);

// Residuals of the e^{ik phi} coefficient conditions of dF/dt = 0 for
// k = 0..3, built from the assembled a_k and omega only (independent route
// from system_residual). The k=3 entry vanishes identically because
// a2 = lam by construction.
std::array<CField, 4> fourier_condition_residual(const StateU& u, int grid_m = 128);

// (Lam2(y) p1^2 - Lam1(x) p2^2) / (Lam1 + Lam2) on the level
// p = sqrt(lam)(cos phi, sin phi), i.e. Lam2 cos^2(phi) - Lam1 sin^2(phi).
double liouville_reference_integral(const LiouvilleData& data, double x,
                                    double y, double phi);

ResidualNorms residual_norms(const Field2& f, int grid_m);
ResidualNorms residual_norms(const CField& f, int grid_m);  // modulus norms

// Grid variance diagnostics (e.g. constancy of a2/lam).
double grid_variance(const Field2& f, int grid_m);

}  // namespace magtorus
