#include "magtorus/assembly.hpp"

#include <cmath>

namespace magtorus {
namespace {

// ---- complex field helpers (local; residual evaluation only) ----------

CField c_add(const CField& a, const CField& b) { return {a.re + b.re, a.im + b.im}; }
CField c_sub(const CField& a, const CField& b) { return {a.re - b.re, a.im - b.im}; }
CField c_scale(double s, const CField& a) { return {s * a.re, s * a.im}; }
CField c_times_i(const CField& a) { return {-1.0 * a.im, a.re}; }
CField c_conj(const CField& a) { return {a.re, -1.0 * a.im}; }
CField c_dx(const CField& a) { return {dx(a.re), dx(a.im)}; }
CField c_dy(const CField& a) { return {dy(a.re), dy(a.im)}; }
CField c_mul_real(const Field2& r, const CField& a) {
  return {mul(r, a.re), mul(r, a.im)};
}
CField c_zero() { return {Field2(0), Field2(0)}; }

int auto_grid(int effective, int floor_m) {
  return std::max({floor_m, 3 * effective + 1, 64});
}

}  // namespace

Field2 magnetic_field(const StateU& u) {
  Field2 omega = 0.25 * (dx(u.g) - dy(u.f));
  // Derivatives have no (0,0) mode, so exactness is structural; pin it
  // against rounding anyway.
  omega.set_coeff(0, 0, {0.0, 0.0});
  return omega;
}

MagneticSystem make_system(const StateU& u) { return {u.lam, magnetic_field(u)}; }

QuadraticIntegralOnLevel assemble_integral(const StateU& u, int grid_m) {
  const Field2 lam = compact(u.lam);
  const Field2 f = compact(u.f), g = compact(u.g);
  const int band = std::max({effective_band(lam), effective_band(f), effective_band(g), 1});
  const int m = grid_m > 0 ? grid_m : auto_grid(band, 0);
  const Field2 root = sqrt_field(lam, m);

  QuadraticIntegralOnLevel q;
  q.a0 = u.u0;
  q.a1_re = truncate(mul(root, f), u.band_limit()).field;
  q.a1_im = truncate(mul(root, g), u.band_limit()).field;
  q.a2 = u.lam;  // coefficientwise the system's lam, by construction
  return q;
}

double eval_integral(const QuadraticIntegralOnLevel& q, double x, double y,
                     double phi) {
  return q.a0.eval(x, y) +
         2.0 * (q.a1_re.eval(x, y) * std::cos(phi) -
                q.a1_im.eval(x, y) * std::sin(phi)) +
         2.0 * q.a2.eval(x, y) * std::cos(2.0 * phi);
}

std::array<Field2, 4> system_residual(const StateU& u) {
  const Field2 lam = compact(u.lam), u0 = compact(u.u0);
  const Field2 f = compact(u.f), g = compact(u.g);
  const Field2 curl = dy(f) - dx(g);
  return {
      dx(f) + dy(g),
      dx(mul(f, lam)) - dy(mul(g, lam)),
      dx(u0) + 2.0 * dx(lam) + -0.5 * mul(g, curl),
      -1.0 * dy(u0) + 2.0 * dy(lam) + 0.5 * mul(f, curl),
  };
}

std::array<CField, 4> fourier_condition_residual(const StateU& u, int grid_m) {
  const Field2 lam = compact(u.lam);
  const int band = std::max(1, effective_band(lam));
  const int m = auto_grid(band, grid_m);

  const QuadraticIntegralOnLevel q = assemble_integral(u, m);
  const Field2 omega = magnetic_field(u);

  // Division-bearing coefficient fields, evaluated pointwise on the grid.
  const Field2 two_lam = 2.0 * lam;
  const Field2 ly_over_2lam = divide_on_grid(dy(lam), two_lam, m);
  const Field2 lx_over_2lam = divide_on_grid(dx(lam), two_lam, m);
  const Field2 omega_over_root = divide_on_grid(compact(omega), sqrt_field(lam, m), m);

  // a_{-1} = conj(a_1), a_0 real, a_2 = lam, a_k = 0 for k > 2.
  const CField a1{compact(q.a1_re), compact(q.a1_im)};
  std::array<CField, 6> a = {c_conj(a1),            // a_{-1}
                             {compact(q.a0), Field2(0)},  // a_0
                             a1,                      // a_1
                             {lam, Field2(0)},        // a_2
                             c_zero(), c_zero()};     // a_3, a_4
  auto ak = [&](int k) -> const CField& { return a[static_cast<std::size_t>(k + 1)]; };

  std::array<CField, 4> res;
  for (int k = 0; k <= 3; ++k) {
    const CField am = ak(k - 1), ap = ak(k + 1);
    // i(k-1) a_{k-1} + i(k+1) a_{k+1} and i(k-1) a_{k-1} - i(k+1) a_{k+1}
    const CField t_sum = c_add(c_times_i(c_scale(k - 1, am)), c_times_i(c_scale(k + 1, ap)));
    const CField t_dif = c_sub(c_times_i(c_scale(k - 1, am)), c_times_i(c_scale(k + 1, ap)));

    CField r = c_mul_real(ly_over_2lam, c_scale(0.5, t_sum));
    // -(Lam_x / 2Lam) * t_dif / (2i); note 1/(2i) = -i/2.
    r = c_sub(r, c_mul_real(lx_over_2lam, c_scale(-0.5, c_times_i(t_dif))));
    r = c_add(r, c_scale(0.5, c_add(c_dx(am), c_dx(ap))));
    r = c_add(r, c_scale(-0.5, c_times_i(c_sub(c_dy(am), c_dy(ap)))));
    r = c_sub(r, c_scale(k, c_times_i(c_mul_real(omega_over_root, ak(k)))));
    res[static_cast<std::size_t>(k)] = std::move(r);
  }
  return res;
}

double liouville_reference_integral(const LiouvilleData& data, double x,
                                    double y, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return data.lam2.eval(y) * c * c - data.lam1.eval(x) * s * s;
}

ResidualNorms residual_norms(const Field2& f, int grid_m) {
  const int m = std::max(grid_m, 2 * f.band_limit() + 1);
  GridSampling g = sample(f, m);
  ResidualNorms out;
  double sq = 0.0;
  for (double v : g.values) {
    out.max = std::max(out.max, std::abs(v));
    sq += v * v;
  }
  out.l2 = std::sqrt(sq / static_cast<double>(g.values.size()));
  return out;
}

ResidualNorms residual_norms(const CField& f, int grid_m) {
  const int m = std::max({grid_m, 2 * f.re.band_limit() + 1, 2 * f.im.band_limit() + 1});
  GridSampling gr = sample(f.re, m), gi = sample(f.im, m);
  ResidualNorms out;
  double sq = 0.0;
  for (std::size_t i = 0; i < gr.values.size(); ++i) {
    const double v2 = gr.values[i] * gr.values[i] + gi.values[i] * gi.values[i];
    out.max = std::max(out.max, std::sqrt(v2));
    sq += v2;
  }
  out.l2 = std::sqrt(sq / static_cast<double>(gr.values.size()));
  return out;
}

double grid_variance(const Field2& f, int grid_m) {
  const int m = std::max(grid_m, 2 * f.band_limit() + 1);
  GridSampling g = sample(f, m);
  double mean_v = 0.0;
  for (double v : g.values) mean_v += v;
  mean_v /= static_cast<double>(g.values.size());
  double var = 0.0;
  for (double v : g.values) var += (v - mean_v) * (v - mean_v);
  return var / static_cast<double>(g.values.size());
}

}  // namespace magtorus
