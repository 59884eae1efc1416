// One-variable 1-periodic trigonometric polynomials. These are the input
// format for Liouville data (cosine-only) and for the Example-1 magnetic
// potential u(y) (cosines and sines).
#pragma once

#include <vector>

#include "magtorus/fourier.hpp"

namespace magtorus {

enum class Axis { X, Y };

// c[0] + sum_{j>=1} c[j] cos(2*pi*j*u)
struct CosPoly1D {
  std::vector<double> coeffs;

  double eval(double u) const;
  double min_value(int samples = 1024) const;
  int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
};

// a[0] + sum_{j>=1} a[j] cos(2*pi*j*u) + sum_{j>=1} b[j] sin(2*pi*j*u)
struct TrigPoly1D {
  std::vector<double> cos_coeffs;  // index = frequency
  std::vector<double> sin_coeffs;  // index = frequency, entry 0 unused

  static TrigPoly1D from_cos(const CosPoly1D& p);
  double eval(double u) const;
  TrigPoly1D derivative() const;
  int degree() const;
};

Field2 to_field(const CosPoly1D& p, Axis axis, int band_limit);
Field2 to_field(const TrigPoly1D& p, Axis axis, int band_limit);

}  // namespace magtorus
