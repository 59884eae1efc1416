#include "magtorus/trig1d.hpp"

#include <algorithm>
#include <cmath>

namespace magtorus {

double CosPoly1D::eval(double u) const {
  double v = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    v += coeffs[j] * std::cos(kTwoPi * static_cast<double>(j) * u);
  return v;
}

double CosPoly1D::min_value(int samples) const {
  double m = eval(0.0);
  for (int i = 1; i < samples; ++i)
    m = std::min(m, eval(static_cast<double>(i) / samples));
  return m;
}

TrigPoly1D TrigPoly1D::from_cos(const CosPoly1D& p) {
  TrigPoly1D t;
  t.cos_coeffs = p.coeffs;
  return t;
}

double TrigPoly1D::eval(double u) const {
  double v = 0.0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
    v += cos_coeffs[j] * std::cos(kTwoPi * static_cast<double>(j) * u);
  for (std::size_t j = 1; j < sin_coeffs.size(); ++j)
    v += sin_coeffs[j] * std::sin(kTwoPi * static_cast<double>(j) * u);
  return v;
}

TrigPoly1D TrigPoly1D::derivative() const {
  TrigPoly1D d;
  const std::size_t nc = cos_coeffs.size(), ns = sin_coeffs.size();
  const std::size_t n = std::max(nc, ns);
  d.cos_coeffs.assign(n, 0.0);
  d.sin_coeffs.assign(n, 0.0);
  // (cos 2pi j u)' = -2pi j sin; (sin 2pi j u)' = 2pi j cos
  for (std::size_t j = 1; j < nc; ++j)
    d.sin_coeffs[j] = -kTwoPi * static_cast<double>(j) * cos_coeffs[j];
  for (std::size_t j = 1; j < ns; ++j)
    d.cos_coeffs[j] = kTwoPi * static_cast<double>(j) * sin_coeffs[j];
  return d;
}

int TrigPoly1D::degree() const {
  return static_cast<int>(std::max(
             cos_coeffs.empty() ? 1u : cos_coeffs.size(),
             sin_coeffs.empty() ? 1u : sin_coeffs.size())) - 1;
}

Field2 to_field(const CosPoly1D& p, Axis axis, int band_limit) {
  return to_field(TrigPoly1D::from_cos(p), axis, band_limit);
}

Field2 to_field(const TrigPoly1D& p, Axis axis, int band_limit) {
  // cos(2pi j u) = (e^{2pi i j u} + c.c.)/2, sin = (e^{2pi i j u} - c.c.)/(2i)
  std::vector<ModeEntry> modes;
  const int deg = p.degree();
  for (int j = 0; j <= deg; ++j) {
    std::complex<double> c{0.0, 0.0};
    if (j < static_cast<int>(p.cos_coeffs.size()))
      c += std::complex<double>(j == 0 ? p.cos_coeffs[0] : 0.5 * p.cos_coeffs[j], 0.0);
    if (j > 0 && j < static_cast<int>(p.sin_coeffs.size()))
      c += std::complex<double>(0.0, -0.5 * p.sin_coeffs[j]);
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    modes.push_back(axis == Axis::X ? ModeEntry{j, 0, c} : ModeEntry{0, j, c});
  }
  return Field2::from_modes(modes, band_limit, /*one_sided=*/true);
}

}  // namespace magtorus
