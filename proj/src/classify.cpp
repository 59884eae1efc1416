// Residual equations, written out.
//
// Collecting the momentum monomials of {F2, H}_mg = 0 with
// H = (p1^2 + p2^2)/(2 Lam) gives three groups. Degree 3 (the same as the
// zero-magnetic-field geodesic case):
//
//   (a1) (a0)_x/L - a0 (1/L)_x - a1 (1/L)_y = 0
//   (a2) (a0)_y/L + 2(a1)_x/L - a1 (1/L)_x - a2 (1/L)_y = 0
//   (a3) (a2)_x/L + 2(a1)_y/L - a0 (1/L)_x - a1 (1/L)_y = 0
//   (a4) (a2)_y/L - a1 (1/L)_x - a2 (1/L)_y = 0
//
// Degree 2, with the renaming f = b0/2, g = -b1/2 (dividing the raw
// p1^2/p2^2 rows by 2/L and the p1p2 row by 2/L):
//
//   (b1') f_x + (L_x/2L) f - (L_y/2L) g - Omega a1 = 0
//   (b2') f_x + g_y - 2 Omega a1 = 0            [difference of the raw rows]
//   (b3)  (2/L) [ (f_y - g_x) + Omega (a0 - a2) ] = 0
//
// The Omega a1 terms drop in the usual gauge a1 == 0, and (b3) becomes
// (8/L) (Omega - (g_x - f_y)/4) when a0 - a2 == 4; we keep the general
// forms so candidates need not be normalized. Degree 1:
//
//   (c1) (c0)_x - Omega b1 = 0
//   (c2) (c0)_y + Omega b0 = 0
//
// which reduce to (c0)_x = -g(g_x - f_y)/2, (c0)_y = -f(g_x - f_y)/2 in
// the normalized gauge. The sign of the (L_y/2L) g term in (b1') follows
// from b1 = -2g: the raw row carries +b1 (1/2L)_y = +(L_y/2L) (g/L)... put
// plainly, all nine forms here were obtained by one mechanical expansion
// of the bracket, not copied, precisely because a sign slip in (b1') is
// invisible on candidates with g == 0.
#include "magtorus/classify.hpp"

#include <cmath>

namespace magtorus {
namespace {

struct GridPack {
  int m = 0;
  std::vector<GridSampling> values;  // one per field, same layout
};

GridSampling grid_of(const Field2& f, int m) { return sample(f, m); }

int bundle_grid(std::initializer_list<const Field2*> fields, int grid_m) {
  int need = 0;
  for (const Field2* f : fields) need = std::max(need, 2 * effective_band(*f) + 1);
  return std::max(grid_m, need);
}

}  // namespace

Monitor ExampleOneSystem::monitor() const {
  TrigPoly1D uu = u;
  return {"F1", [uu](double, const double* y) { return y[2] + uu.eval(y[1]); }};
}

ExampleOneSystem example_one_system(const ExampleOneData& d, int n_work) {
  if (d.lam_y.min_value() <= 0.0)
    throw std::invalid_argument("Example-1 metric factor must be positive");
  ExampleOneSystem s;
  s.system.lam = to_field(d.lam_y, Axis::Y, n_work);
  TrigPoly1D du = d.u_y.derivative();
  s.system.omega = -1.0 * to_field(du, Axis::Y, n_work);
  s.u = d.u_y;
  return s;
}

ResidualBundle all_levels_residuals(const MagneticSystem& sys,
                                    const AllLevelsQuadratic& q, int grid_m) {
  const Field2 lam = compact(sys.lam), omega = compact(sys.omega);
  const Field2 a0 = compact(q.a0), a1 = compact(q.a1), a2 = compact(q.a2);
  const Field2 b0 = compact(q.b0), b1 = compact(q.b1), c0 = compact(q.c0);

  const int m = bundle_grid({&lam, &omega, &a0, &a1, &a2, &b0, &b1, &c0}, grid_m);
  const std::size_t total = static_cast<std::size_t>(m) * m;

  auto g = [&](const Field2& f) { return grid_of(f, m).values; };
  const auto L = g(lam), Lx = g(dx(lam)), Ly = g(dy(lam)), Om = g(omega);
  const auto A0 = g(a0), A0x = g(dx(a0)), A0y = g(dy(a0));
  const auto A1 = g(a1), A1x = g(dx(a1)), A1y = g(dy(a1));
  const auto A2 = g(a2), A2x = g(dx(a2)), A2y = g(dy(a2));
  const auto B0 = g(b0), B0x = g(dx(b0)), B0y = g(dy(b0));
  const auto B1 = g(b1), B1x = g(dx(b1)), B1y = g(dy(b1));
  const auto C0x = g(dx(c0)), C0y = g(dy(c0));

  std::array<std::vector<double>, 9> r;
  for (auto& v : r) v.resize(total);

  for (std::size_t i = 0; i < total; ++i) {
    const double lv = L[i];
    if (lv <= 0.0)
      throw PositivityViolation((i / m) / static_cast<double>(m),
                                (i % m) / static_cast<double>(m), lv);
    const double inv = 1.0 / lv;
    const double qx = -Lx[i] * inv * inv;  // (1/L)_x
    const double qy = -Ly[i] * inv * inv;  // (1/L)_y
    const double f = 0.5 * B0[i], gg = -0.5 * B1[i];
    const double fx = 0.5 * B0x[i], fy = 0.5 * B0y[i];
    const double gx = -0.5 * B1x[i], gy = -0.5 * B1y[i];

    r[0][i] = A0x[i] * inv - A0[i] * qx - A1[i] * qy;
    r[1][i] = A0y[i] * inv + 2.0 * A1x[i] * inv - A1[i] * qx - A2[i] * qy;
    r[2][i] = A2x[i] * inv + 2.0 * A1y[i] * inv - A0[i] * qx - A1[i] * qy;
    r[3][i] = A2y[i] * inv - A1[i] * qx - A2[i] * qy;
    r[4][i] = fx + 0.5 * Lx[i] * inv * f - 0.5 * Ly[i] * inv * gg - Om[i] * A1[i];
    r[5][i] = fx + gy - 2.0 * Om[i] * A1[i];
    r[6][i] = 2.0 * inv * ((fy - gx) + Om[i] * (A0[i] - A2[i]));
    r[7][i] = C0x[i] - Om[i] * B1[i];
    r[8][i] = C0y[i] + Om[i] * B0[i];
  }

  ResidualBundle out;
  for (std::size_t k = 0; k < 9; ++k) {
    GridSampling gs{m, std::move(r[k])};
    double mx = 0.0, sq = 0.0;
    for (double v : gs.values) {
      mx = std::max(mx, std::abs(v));
      sq += v * v;
    }
    out.norms[k] = {mx, std::sqrt(sq / static_cast<double>(total))};
    out.fields[k] = field_from_grid(gs, m / 2 - 1);
  }
  return out;
}

double ResidualBundle::worst_max() const {
  double w = 0.0;
  for (const auto& n : norms) w = std::max(w, n.max);
  return w;
}

ConsequenceReport proof_consequence_checks(const MagneticSystem& sys,
                                           const AllLevelsQuadratic& q,
                                           int grid_m) {
  const Field2 b0 = compact(q.b0), b1 = compact(q.b1), c0 = compact(q.c0);
  const int m = bundle_grid({&sys.lam, &b0, &b1, &c0}, grid_m);
  const auto B0 = grid_of(b0, m).values;
  const auto B1 = grid_of(b1, m).values;
  const auto C0 = grid_of(c0, m).values;

  const std::size_t total = B0.size();
  double fg_sum = 0.0, fg_sq = 0.0, k1_sum = 0.0, k1_sq = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double f = 0.5 * B0[i], g = -0.5 * B1[i];
    const double fg = f * g;
    const double k1 = C0[i] + 0.25 * (g * g - f * f);
    fg_sum += fg;
    fg_sq += fg * fg;
    k1_sum += k1;
    k1_sq += k1 * k1;
  }
  ConsequenceReport rep;
  const double n = static_cast<double>(total);
  rep.fg_mean = fg_sum / n;
  rep.fg_variance = std::max(0.0, fg_sq / n - rep.fg_mean * rep.fg_mean);
  rep.k1_mean = k1_sum / n;
  rep.k1_variance = std::max(0.0, k1_sq / n - rep.k1_mean * rep.k1_mean);
  return rep;
}

AllLevelsQuadratic liouville_candidate(const LiouvilleData& data, int band,
                                       int grid_m) {
  const int deg = std::max(data.lam1.degree(), data.lam2.degree());
  const int nw = std::max(band, deg);
  const Field2 l1 = to_field(data.lam1, Axis::X, nw);
  const Field2 l2 = to_field(data.lam2, Axis::Y, nw);
  const Field2 lam = l1 + l2;
  const int m = std::max(grid_m, 3 * (deg + 1));

  AllLevelsQuadratic q;
  q.a0 = truncate(divide_on_grid(l2, lam, m), band).field;
  q.a1 = Field2(0);
  q.a2 = -1.0 * truncate(divide_on_grid(l1, lam, m), band).field;
  q.b0 = Field2(0);
  q.b1 = Field2(0);
  q.c0 = Field2(0);
  return q;
}

AllLevelsQuadratic example_one_candidate(const ExampleOneData& d, double alpha,
                                         double beta, double gamma, int band,
                                         int grid_m) {
  const int deg = std::max(d.lam_y.degree(), d.u_y.degree());
  const int nw = std::max(band, 2 * deg);
  const Field2 lam = to_field(d.lam_y, Axis::Y, nw);
  const Field2 uf = to_field(d.u_y, Axis::Y, nw);
  const int m = std::max(grid_m, 3 * (deg + 1));
  const Field2 half_beta_over_lam =
      truncate(divide_on_grid(Field2::constant(0.5 * beta), lam, m), band).field;

  AllLevelsQuadratic q;
  q.a0 = Field2::constant(alpha) + half_beta_over_lam;
  q.a1 = Field2(0);
  q.a2 = half_beta_over_lam;
  q.b0 = (2.0 * alpha) * uf;
  q.b1 = Field2(0);
  q.c0 = alpha * truncate(mul(uf, uf), band).field + Field2::constant(gamma);
  return q;
}

AllLevelsQuadratic one_level_candidate(const StateU& u) {
  AllLevelsQuadratic q;
  q.a0 = Field2::constant(2.0);
  q.a1 = Field2(0);
  q.a2 = Field2::constant(-2.0);
  q.b0 = 2.0 * u.f;
  q.b1 = -2.0 * u.g;
  q.c0 = u.u0;
  return q;
}

CompiledQuadratic CompiledQuadratic::from(const AllLevelsQuadratic& q) {
  CompiledQuadratic c;
  c.a0 = CompiledField(q.a0);
  c.a1 = CompiledField(q.a1);
  c.a2 = CompiledField(q.a2);
  c.b0 = CompiledField(q.b0);
  c.b1 = CompiledField(q.b1);
  c.c0 = CompiledField(q.c0);
  return c;
}

double CompiledQuadratic::eval(double x, double y, double p1, double p2) const {
  return a0.eval(x, y) * p1 * p1 + 2.0 * a1.eval(x, y) * p1 * p2 +
         a2.eval(x, y) * p2 * p2 + b0.eval(x, y) * p1 + b1.eval(x, y) * p2 +
         c0.eval(x, y);
}

Monitor monitor_quadratic_cotangent(const CompiledQuadratic& q) {
  return {"F2", [&q](double, const double* y) {
            return q.eval(y[0], y[1], y[2], y[3]);
          }};
}

std::vector<EnergyDrift> quadratic_drift_by_energy(
    const CompiledSystem& sys, const CompiledQuadratic& q,
    const PhasePointAngle& start, std::span<const double> levels,
    double duration, const IntegratorSettings& settings) {
  std::vector<EnergyDrift> out;
  for (double h : levels) {
    const PhasePointCotangent p0 = cotangent_on_level(sys, start, h);
    const Monitor monitors[] = {monitor_quadratic_cotangent(q),
                                monitor_hamiltonian(sys)};
    IntegratorSettings s = settings;
    if (s.record_dt <= 0.0) s.record_dt = duration / 400.0;
    const Trajectory traj = integrate(sys, p0, duration, s, monitors);
    const auto stats = conservation_report(traj);
    out.push_back({h, stats[0].rel_drift, stats[1].rel_drift});
  }
  return out;
}

}  // namespace magtorus
