#include "magtorus/jet.hpp"

#include <cmath>
#include <limits>

namespace magtorus {
namespace {

int positivity_resolution(const Field2& f, int requested) {
  if (requested > 0) return requested;
  return std::max(64, 2 * f.band_limit() + 1);
}

double component_max_norm(const StateU& u) {
  const int m = std::max(64, 2 * u.band_limit() + 1);
  double v = 0.0;
  for (const Field2* f : {&u.lam, &u.u0, &u.f, &u.g})
    v = std::max(v, max_norm(*f, m));
  return v;
}

}  // namespace

StateU liouville_initial_state(const LiouvilleData& data, int n_work) {
  if (data.lam1.min_value() <= 0.0 || data.lam2.min_value() <= 0.0)
    throw std::invalid_argument("Liouville data must be strictly positive");
  if (n_work < std::max(data.lam1.degree(), data.lam2.degree()))
    throw std::invalid_argument("working band limit below data degree");
  const Field2 l1 = to_field(data.lam1, Axis::X, n_work);
  const Field2 l2 = to_field(data.lam2, Axis::Y, n_work);
  StateU u;
  u.lam = l1 + l2;
  u.u0 = 2.0 * l2 - 2.0 * l1;
  u.f = Field2(n_work);
  u.g = Field2(n_work);
  return u;
}

StateU symmetry_rhs(const StateU& u) {
  const Field2 lam_x = dx(u.lam), lam_y = dy(u.lam);
  const Field2 u0_x = dx(u.u0), u0_y = dy(u.u0);
  const Field2 f_y = dy(u.f), g_x = dx(u.g);

  StateU out;
  out.lam = mul(u.g, lam_x) + mul(u.lam, g_x) + mul(u.f, lam_y) + mul(u.lam, f_y);
  out.u0 = -2.0 * mul(u.g, lam_x) + mul(u.g, u0_x) - 2.0 * mul(u.lam, g_x) +
           2.0 * mul(u.f, lam_y) + mul(u.f, u0_y) + 2.0 * mul(u.lam, f_y);
  out.f = 2.0 * u0_y;
  out.g = -2.0 * u0_x;
  return out;
}

StateJet ck_jet(const StateU& u0, int order) {
  if (order < 1) throw std::invalid_argument("jet order must be >= 1");
  const int n_work = u0.band_limit();

  StateJet jet;
  jet.band_limit = n_work;
  jet.coeffs.reserve(order + 1);
  jet.coeffs.push_back(u0);

  // Cached spatial derivatives of each retained order.
  std::vector<Field2> lam_x{dx(u0.lam)}, lam_y{dy(u0.lam)};
  std::vector<Field2> u0_x{dx(u0.u0)}, u0_y{dy(u0.u0)};
  std::vector<Field2> f_y{dy(u0.f)}, g_x{dx(u0.g)};

  auto bounded = [&](const Field2& f) {
    TruncationResult t = truncate(f, n_work);
    jet.discarded_mass += t.discarded_mass;
    return t.field;
  };

  for (int k = 0; k < order; ++k) {
    Field2 acc_lam(n_work), acc_u0(n_work);
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      const StateU& ui = jet.coeffs[i];
      // lam row: g lam_x + lam g_x + f lam_y + lam f_y
      acc_lam = acc_lam + bounded(mul(ui.g, lam_x[j])) +
                bounded(mul(ui.lam, g_x[j])) + bounded(mul(ui.f, lam_y[j])) +
                bounded(mul(ui.lam, f_y[j]));
      // u0 row: -2 g lam_x + g u0_x - 2 lam g_x + 2 f lam_y + f u0_y + 2 lam f_y
      acc_u0 = acc_u0 + -2.0 * bounded(mul(ui.g, lam_x[j])) +
               bounded(mul(ui.g, u0_x[j])) + -2.0 * bounded(mul(ui.lam, g_x[j])) +
               2.0 * bounded(mul(ui.f, lam_y[j])) + bounded(mul(ui.f, u0_y[j])) +
               2.0 * bounded(mul(ui.lam, f_y[j]));
    }
    const double inv = 1.0 / (k + 1);
    StateU next;
    next.lam = inv * acc_lam;
    next.u0 = inv * acc_u0;
    next.f = (2.0 * inv) * u0_y[k];
    next.g = (-2.0 * inv) * u0_x[k];
    lam_x.push_back(dx(next.lam));
    lam_y.push_back(dy(next.lam));
    u0_x.push_back(dx(next.u0));
    u0_y.push_back(dy(next.u0));
    f_y.push_back(dy(next.f));
    g_x.push_back(dx(next.g));
    jet.coeffs.push_back(std::move(next));
  }
  return jet;
}

StateU evaluate_jet(const StateJet& jet, double t, int positivity_grid) {
  const int order = jet.order();
  StateU acc = jet.coeffs[order];
  for (int k = order - 1; k >= 0; --k) {
    const StateU& c = jet.coeffs[k];
    acc.lam = c.lam + t * acc.lam;
    acc.u0 = c.u0 + t * acc.u0;
    acc.f = c.f + t * acc.f;
    acc.g = c.g + t * acc.g;
  }
  const int m = positivity_resolution(acc.lam, positivity_grid);
  GridSampling g = sample(acc.lam, std::max(m, 2 * acc.lam.band_limit() + 1));
  for (int i = 0; i < g.resolution; ++i)
    for (int j = 0; j < g.resolution; ++j) {
      const double v = g.values[static_cast<std::size_t>(i) * g.resolution + j];
      if (v <= 0.0)
        throw PositivityViolation(static_cast<double>(i) / g.resolution,
                                  static_cast<double>(j) / g.resolution, v);
    }
  return acc;
}

double jet_tail_term(const StateJet& jet, double t) {
  return component_max_norm(jet.coeffs.back()) *
         std::pow(std::abs(t), jet.order());
}

JetConvergenceReport jet_convergence_report(const StateJet& jet, double t) {
  JetConvergenceReport rep;
  for (const StateU& u : jet.coeffs)
    rep.order_norms.push_back(component_max_norm(u));
  for (std::size_t k = 0; k < rep.order_norms.size(); ++k)
    rep.scaled_terms.push_back(rep.order_norms[k] *
                               std::pow(std::abs(t), static_cast<double>(k)));
  rep.tail_term = rep.scaled_terms.back();

  // Ratio test over the last few orders with nonzero norms. The recursion
  // produces structural zeros at low orders (lam_1, u0_1, even/odd parity
  // in f, g), so use ratios two orders apart.
  double log_sum = 0.0;
  int used = 0;
  const int top = jet.order();
  for (int k = top; k >= 2 && used < 3; --k) {
    const double hi = rep.order_norms[k], lo = rep.order_norms[k - 2];
    if (hi > 0.0 && lo > 0.0) {
      log_sum += 0.5 * std::log(hi / lo);
      ++used;
    }
  }
  rep.radius_estimate = used ? std::exp(-log_sum / used)
                             : std::numeric_limits<double>::infinity();
  return rep;
}

bool within_trust(const StateJet& jet, double t, const TrustPolicy& policy) {
  if (jet_tail_term(jet, t) >= policy.tail_tol) return false;
  try {
    const StateU u = evaluate_jet(jet, t);
    const int m = std::max(64, 2 * jet.band_limit + 1);
    const double floor0 = min_on_grid(jet.coeffs[0].lam, m);
    return min_on_grid(u.lam, m) >= policy.lam_floor_factor * floor0;
  } catch (const PositivityViolation&) {
    return false;
  }
}

double max_trusted_t(const StateJet& jet, double t_hi, const TrustPolicy& policy) {
  if (within_trust(jet, t_hi, policy)) return t_hi;
  double lo = 0.0, hi = t_hi;
  for (int it = 0; it < 60 && hi - lo > 1e-12 * t_hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (within_trust(jet, mid, policy) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace magtorus
