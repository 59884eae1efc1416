// Taylor-in-t jet of the symmetry flow
//
//   Lam_t = g Lam_x + Lam g_x + f Lam_y + Lam f_y
//   u0_t  = -2 g Lam_x + g u0_x - 2 Lam g_x + 2 f Lam_y + f u0_y + 2 Lam f_y
//   f_t   = 2 u0_y
//   g_t   = -2 u0_x
//
// grown from Liouville initial data (Lam1(x)+Lam2(y), 2Lam2-2Lam1, 0, 0).
// The right-hand side is bilinear in (U, dU) plus the two linear rows, so
// the Taylor coefficients satisfy the convolution recursion
//   (k+1) U_{k+1} = sum_{i+j=k} Bilinear(U_i, dU_j) + Linear(dU_k).
#pragma once

#include <vector>

#include "magtorus/fourier.hpp"
#include "magtorus/trig1d.hpp"

namespace magtorus {

struct LiouvilleData {
  CosPoly1D lam1;  // function of x
  CosPoly1D lam2;  // function of y
};

// The unknown vector U = (lam, u0, f, g). lam must stay positive on the
// grid for anything downstream to make sense.
struct StateU {
  Field2 lam, u0, f, g;
  int band_limit() const { return lam.band_limit(); }
};

struct StateJet {
  std::vector<StateU> coeffs;   // coeffs[k] is the t^k coefficient
  int band_limit = 0;
  double discarded_mass = 0.0;  // accumulated truncation loss, all products
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

StateU liouville_initial_state(const LiouvilleData& data, int n_work);

// One application of the evolution right-hand side, exact (band grows).
StateU symmetry_rhs(const StateU& u);

// Builds coefficients U_0..U_K at the band limit of u0, truncating each
// product back and accumulating the discarded spectral mass.
StateJet ck_jet(const StateU& u0, int order);

// Horner evaluation of the jet at time t. Checks positivity of the
// resulting lam on the grid (PositivityViolation when t is too large).
StateU evaluate_jet(const StateJet& jet, double t, int positivity_grid = 0);

// Max-norm of the last retained term at time t, ||U_K|| t^K.
double jet_tail_term(const StateJet& jet, double t);

struct JetConvergenceReport {
  std::vector<double> order_norms;  // ||U_k||, max over the four components
  std::vector<double> scaled_terms; // ||U_k|| t^k
  double tail_term = 0.0;
  double radius_estimate = 0.0;     // empirical ratio-test radius, inf if flat
};
JetConvergenceReport jet_convergence_report(const StateJet& jet, double t);

// Trust policy for evaluation times: the last retained term must be small
// and lam(., t) must keep at least half of its t=0 minimum.
struct TrustPolicy {
  double tail_tol = 1e-9;
  double lam_floor_factor = 0.5;
};
bool within_trust(const StateJet& jet, double t, const TrustPolicy& policy = {});
// Largest trusted t in (0, t_hi], by bisection; 0 if even tiny t fails.
double max_trusted_t(const StateJet& jet, double t_hi, const TrustPolicy& policy = {});

}  // namespace magtorus
