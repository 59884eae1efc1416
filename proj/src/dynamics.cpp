#include "magtorus/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace magtorus {
namespace {

// Dormand-Prince 5(4), FSAL. b is the 5th-order propagating weight row,
// bs the embedded 4th-order row.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kBs1 = 5179.0 / 57600, kBs3 = 7571.0 / 16695,
                 kBs4 = 393.0 / 640, kBs5 = -92097.0 / 339200,
                 kBs6 = 187.0 / 2100, kBs7 = 1.0 / 40;

template <int D>
using Vec = std::array<double, D>;

template <int D, class Rhs, class Sink>
void run_adaptive(Rhs&& rhs, Vec<D> y, double duration,
                  const IntegratorSettings& s, Sink&& sink) {
  double t = 0.0;
  sink(t, y);
  double next_record = s.record_dt > 0.0 ? s.record_dt : -1.0;
  double last_sink_t = 0.0;

  Vec<D> k1 = rhs(t, y), k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
  double h_prop = std::min(std::abs(s.step), duration);
  double r_prev = 1.0;  // last accepted err/h ratio, for the PI controller

  while (t < duration - 1e-14 * duration) {
    double t_stop = duration;
    if (next_record > 0.0) t_stop = std::min(t_stop, next_record);
    const double h = std::min(h_prop, t_stop - t);
    const bool clamped = h < h_prop;
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError(t, h);

    Vec<D> w;
    for (int i = 0; i < D; ++i) w[i] = y[i] + h * kA21 * k1[i];
    k2 = rhs(t + kC2 * h, w);
    for (int i = 0; i < D; ++i) w[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    k3 = rhs(t + kC3 * h, w);
    for (int i = 0; i < D; ++i)
      w[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    k4 = rhs(t + kC4 * h, w);
    for (int i = 0; i < D; ++i)
      w[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    k5 = rhs(t + kC5 * h, w);
    for (int i = 0; i < D; ++i)
      w[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                         kA64 * k4[i] + kA65 * k5[i]);
    k6 = rhs(t + h, w);
    Vec<D> y5;
    for (int i = 0; i < D; ++i)
      y5[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                          kB5 * k5[i] + kB6 * k6[i]);
    k7 = rhs(t + h, y5);

    // Local error estimate against the embedded 4th-order result, scaled
    // to the "error per unit time <= tol" acceptance rule.
    double err_sq = 0.0;
    for (int i = 0; i < D; ++i) {
      const double y4 = y[i] + h * (kBs1 * k1[i] + kBs3 * k3[i] + kBs4 * k4[i] +
                                    kBs5 * k5[i] + kBs6 * k6[i] + kBs7 * k7[i]);
      const double sc = s.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
      const double e = (y5[i] - y4) / sc;
      err_sq += e * e;
    }
    const double err = std::sqrt(err_sq / D);
    const double ratio = err / h;  // accept when <= 1

    if (ratio <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      if (next_record > 0.0 && t >= next_record - 1e-12) {
        sink(t, y);
        last_sink_t = t;
        next_record += s.record_dt;
      } else if (next_record <= 0.0) {
        sink(t, y);
        last_sink_t = t;
      }
      const double fac = 0.9 * std::pow(std::max(ratio, 1e-10), -0.175) *
                         std::pow(r_prev, 0.1);
      r_prev = std::max(ratio, 1e-10);
      if (!clamped) h_prop = h * std::clamp(fac, 0.2, 5.0);
    } else {
      h_prop = h * std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 1.0);
    }
  }
  if (t > last_sink_t + 1e-12) sink(t, y);
}

template <int D, class Rhs, class Sink>
void run_fixed_rk4(Rhs&& rhs, Vec<D> y, double duration,
                   const IntegratorSettings& s, Sink&& sink) {
  const long steps = std::max(1L, std::lround(std::ceil(duration / s.step)));
  const double h = duration / static_cast<double>(steps);
  long stride = 1;
  if (s.record_dt > 0.0)
    stride = std::max(1L, std::lround(s.record_dt / h));
  double t = 0.0;
  sink(t, y);
  for (long n = 0; n < steps; ++n) {
    const Vec<D> k1 = rhs(t, y);
    Vec<D> w;
    for (int i = 0; i < D; ++i) w[i] = y[i] + 0.5 * h * k1[i];
    const Vec<D> k2 = rhs(t + 0.5 * h, w);
    for (int i = 0; i < D; ++i) w[i] = y[i] + 0.5 * h * k2[i];
    const Vec<D> k3 = rhs(t + 0.5 * h, w);
    for (int i = 0; i < D; ++i) w[i] = y[i] + h * k3[i];
    const Vec<D> k4 = rhs(t + h, w);
    for (int i = 0; i < D; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = h * static_cast<double>(n + 1);
    if ((n + 1) % stride == 0 || n + 1 == steps) sink(t, y);
  }
}

template <int D, class Rhs>
Trajectory run(Rhs&& rhs, const Vec<D>& start, double duration,
               const IntegratorSettings& settings,
               std::span<const Monitor> monitors) {
  Trajectory traj;
  traj.dim = D;
  for (const auto& m : monitors) traj.monitor_names.push_back(m.name);
  traj.monitor_values.resize(monitors.size());

  auto sink = [&](double t, const Vec<D>& y) {
    traj.times.push_back(t);
    std::array<double, 4> folded{0.0, 0.0, 0.0, 0.0};
    std::array<double, 2> wind{0.0, 0.0};
    for (int i = 0; i < D; ++i) folded[i] = y[i];
    for (int i = 0; i < 2; ++i) {
      wind[i] = std::floor(folded[i]);
      folded[i] -= wind[i];
    }
    traj.states.push_back(folded);
    traj.windings.push_back(wind);
    for (std::size_t m = 0; m < monitors.size(); ++m)
      traj.monitor_values[m].push_back(monitors[m].fn(t, y.data()));
  };

  if (settings.scheme == Scheme::FixedRk4)
    run_fixed_rk4<D>(rhs, start, duration, settings, sink);
  else
    run_adaptive<D>(rhs, start, duration, settings, sink);
  return traj;
}

}  // namespace

IntegrationError::IntegrationError(double t, double h)
    : std::runtime_error("step size underflow at t = " + std::to_string(t) +
                         " (h = " + std::to_string(h) + ")"),
      t_(t),
      h_(h) {}

CompiledSystem CompiledSystem::from(const MagneticSystem& sys) {
  CompiledSystem c;
  c.lam = CompiledField(sys.lam);
  c.lam_x = CompiledField(dx(sys.lam));
  c.lam_y = CompiledField(dy(sys.lam));
  c.omega = CompiledField(sys.omega);
  return c;
}

CompiledIntegral CompiledIntegral::from(const QuadraticIntegralOnLevel& q) {
  CompiledIntegral c;
  c.a0 = CompiledField(q.a0);
  c.a1_re = CompiledField(q.a1_re);
  c.a1_im = CompiledField(q.a1_im);
  c.a2 = CompiledField(q.a2);
  return c;
}

double CompiledIntegral::eval(double x, double y, double phi) const {
  return a0.eval(x, y) +
         2.0 * (a1_re.eval(x, y) * std::cos(phi) -
                a1_im.eval(x, y) * std::sin(phi)) +
         2.0 * a2.eval(x, y) * std::cos(2.0 * phi);
}

std::array<double, 3> angle_flow_rhs(const CompiledSystem& sys,
                                     const PhasePointAngle& p) {
  const double lam = sys.lam.eval(p.x, p.y);
  if (lam <= 0.0) throw PositivityViolation(p.x, p.y, lam);
  const double root = std::sqrt(lam);
  const double c = std::cos(p.phi), s = std::sin(p.phi);
  const double lx = sys.lam_x.eval(p.x, p.y), ly = sys.lam_y.eval(p.x, p.y);
  const double om = sys.omega.eval(p.x, p.y);
  return {c / root, s / root,
          ly * c / (2.0 * lam * root) - lx * s / (2.0 * lam * root) - om / lam};
}

std::array<double, 4> hamiltonian_flow_rhs(const CompiledSystem& sys,
                                           const PhasePointCotangent& p) {
  const double lam = sys.lam.eval(p.x, p.y);
  if (lam <= 0.0) throw PositivityViolation(p.x, p.y, lam);
  const double lx = sys.lam_x.eval(p.x, p.y), ly = sys.lam_y.eval(p.x, p.y);
  const double om = sys.omega.eval(p.x, p.y);
  const double p_sq = p.p1 * p.p1 + p.p2 * p.p2;
  const double h_x = -p_sq * lx / (2.0 * lam * lam);
  const double h_y = -p_sq * ly / (2.0 * lam * lam);
  return {p.p1 / lam, p.p2 / lam, -h_x + om * p.p2 / lam, -h_y - om * p.p1 / lam};
}

Trajectory integrate(const CompiledSystem& sys, const PhasePointAngle& start,
                     double duration, const IntegratorSettings& settings,
                     std::span<const Monitor> monitors) {
  auto rhs = [&sys](double, const Vec<3>& y) -> Vec<3> {
    return angle_flow_rhs(sys, {y[0], y[1], y[2]});
  };
  return run<3>(rhs, {start.x, start.y, start.phi}, duration, settings, monitors);
}

Trajectory integrate(const CompiledSystem& sys, const PhasePointCotangent& start,
                     double duration, const IntegratorSettings& settings,
                     std::span<const Monitor> monitors) {
  auto rhs = [&sys](double, const Vec<4>& y) -> Vec<4> {
    return hamiltonian_flow_rhs(sys, {y[0], y[1], y[2], y[3]});
  };
  return run<4>(rhs, {start.x, start.y, start.p1, start.p2}, duration, settings,
                monitors);
}

std::vector<DriftStat> conservation_report(const Trajectory& traj) {
  std::vector<DriftStat> out;
  for (std::size_t m = 0; m < traj.monitor_names.size(); ++m) {
    const auto& vals = traj.monitor_values[m];
    DriftStat st;
    st.name = traj.monitor_names[m];
    st.initial = vals.empty() ? 0.0 : vals.front();
    for (double v : vals) st.max_drift = std::max(st.max_drift, std::abs(v - st.initial));
    st.rel_drift = st.max_drift / std::max(1.0, std::abs(st.initial));
    out.push_back(st);
  }
  return out;
}

PhasePointCotangent cotangent_on_level(const CompiledSystem& sys,
                                       const PhasePointAngle& p, double h_level) {
  const double lam = sys.lam.eval(p.x, p.y);
  if (lam <= 0.0) throw PositivityViolation(p.x, p.y, lam);
  const double r = std::sqrt(2.0 * h_level * lam);
  return {p.x, p.y, r * std::cos(p.phi), r * std::sin(p.phi)};
}

double cross_check(const CompiledSystem& sys, const PhasePointAngle& start,
                   double duration, IntegratorSettings settings) {
  if (settings.record_dt <= 0.0) settings.record_dt = duration / 200.0;
  const Trajectory ta = integrate(sys, start, duration, settings);
  const Trajectory tc =
      integrate(sys, cotangent_on_level(sys, start), duration, settings);
  const std::size_t n = std::min(ta.times.size(), tc.times.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pa = ta.unfolded_position(i);
    const auto pc = tc.unfolded_position(i);
    worst = std::max(worst, std::hypot(pa[0] - pc[0], pa[1] - pc[1]));
  }
  return worst;
}

Monitor monitor_hamiltonian(const CompiledSystem& sys) {
  return {"H", [&sys](double, const double* y) {
            const double lam = sys.lam.eval(y[0], y[1]);
            return (y[2] * y[2] + y[3] * y[3]) / (2.0 * lam);
          }};
}

Monitor monitor_integral_angle(const CompiledIntegral& q) {
  return {"F", [&q](double, const double* y) { return q.eval(y[0], y[1], y[2]); }};
}

}  // namespace magtorus
