// Truncated 2-D Fourier series on the unit torus: arithmetic, calculus,
// sampling. Everything downstream (the deformation jet, the residual
// checks, the flow integrators) is built on Field2.
#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace magtorus {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Thrown when an operation that needs a positive field (sqrt, division,
// conformal factor) meets a non-positive sample. Carries the offending
// grid point.
class PositivityViolation : public std::runtime_error {
 public:
  PositivityViolation(double x, double y, double value);
  double x() const { return x_; }
  double y() const { return y_; }
  double value() const { return value_; }

 private:
  double x_, y_, value_;
};

struct ModeEntry {
  int m = 0;
  int n = 0;
  std::complex<double> c{0.0, 0.0};
};

// Real analytic 1-periodic function of (x, y) held as a truncated Fourier
// series, f(x,y) = sum c_{mn} exp(2*pi*i*(m x + n y)) over |m|,|n| <= N.
// Real-valuedness is the class invariant: c_{-m,-n} = conj(c_{m,n}).
// Fields are immutable values after construction; all operations below are
// pure functions and safe to call concurrently.
class Field2 {
 public:
  Field2() : n_(0), c_(1) {}
  explicit Field2(int band_limit);

  static Field2 constant(double value);
  // Builds a field from an explicit mode list. With one_sided = false the
  // list must be closed under Hermitian conjugation; with one_sided = true
  // each entry (m, n, c) implies the mirror entry (-m, -n, conj c).
  static Field2 from_modes(std::span<const ModeEntry> modes, int band_limit,
                           bool one_sided = false);

  int band_limit() const { return n_; }
  int side() const { return 2 * n_ + 1; }

  std::complex<double> coeff(int m, int n) const;
  void set_coeff(int m, int n, std::complex<double> value);

  std::span<const std::complex<double>> raw() const { return c_; }
  std::span<std::complex<double>> raw() { return c_; }

  double eval(double x, double y) const;

  // Averages c(m,n) with conj(c(-m,-n)); rounding is the only thing it
  // should ever remove.
  void symmetrize();

 private:
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(m + n_) * side() + (n + n_);
  }
  int n_;
  std::vector<std::complex<double>> c_;
};

// -- calculus ----------------------------------------------------------

Field2 dx(const Field2& f);
Field2 dy(const Field2& f);

// -- algebra -----------------------------------------------------------

enum class MulPath { Auto, Fft, DirectConvolution };

// Exact product: band limit grows to N_a + N_b. The FFT path samples on a
// grid with M >= 2(N_a+N_b)+1 per axis, so the full result band is
// alias-free; the direct path is plain coefficient convolution over the
// nonzero entries.
Field2 mul(const Field2& a, const Field2& b, MulPath path = MulPath::Auto);

Field2 linear_combine(std::span<const std::pair<double, const Field2*>> terms);

Field2 operator+(const Field2& a, const Field2& b);
Field2 operator-(const Field2& a, const Field2& b);
Field2 operator*(double s, const Field2& f);

struct TruncationResult {
  Field2 field;
  double discarded_mass = 0.0;  // l2 mass of the coefficients cut off
};
TruncationResult truncate(const Field2& f, int band_limit);

// Largest max(|m|,|n|) carrying a nonzero coefficient; 0 for the zero field.
int effective_band(const Field2& f);
// Same function, smallest enclosing band (exact, cheap).
Field2 compact(const Field2& f);
// f(x - sx, y - sy) as a field (exact phase shift of the spectrum).
Field2 shift(const Field2& f, double sx, double sy);

// -- grid sampling -----------------------------------------------------

// Uniform M x M samples on [0,1)^2, row-major with x outermost:
// values[i*M + j] = f(i/M, j/M).
struct GridSampling {
  int resolution = 0;
  std::vector<double> values;
};

GridSampling sample(const Field2& f, int resolution);     // needs M >= 2N+1
Field2 field_from_grid(const GridSampling& g, int band_limit);

// Pointwise sqrt on an M x M grid (M >= 3N dealiasing headroom), then back
// to coefficients at band M/2-1. Throws PositivityViolation on a
// non-positive sample.
Field2 sqrt_field(const Field2& f, int resolution);
// Pointwise num/den on the grid; same positivity contract on den.
Field2 divide_on_grid(const Field2& num, const Field2& den, int resolution);

double min_on_grid(const Field2& f, int resolution);

// -- reductions --------------------------------------------------------

double mean(const Field2& f);                       // c_{00}
double max_norm(const Field2& f, int resolution);   // max |f| over the grid
double l2_norm(const Field2& f);                    // sqrt(int |f|^2) = sqrt(sum |c|^2)
double hermitian_asymmetry(const Field2& f);        // max |c(m,n) - conj(c(-m,-n))|
double spectral_mass(const Field2& f);              // sqrt(sum |c|^2)
// Mass split used by the Liouville-form test: modes with m==0 or n==0
// versus genuinely mixed modes.
struct MassSplit {
  double separable = 0.0;
  double mixed = 0.0;
};
MassSplit split_mass(const Field2& f);

// -- fast pointwise evaluation ----------------------------------------
//
// Snapshot of the nonzero modes of a Field2, one-sided, for tight loops
// (ODE right-hand sides evaluate fields millions of times). Exact same
// value as Field2::eval.
class CompiledField {
 public:
  CompiledField() = default;
  explicit CompiledField(const Field2& f);

  double eval(double x, double y) const;
  std::size_t term_count() const { return terms_.size(); }

 private:
  struct Term {
    int m, n;
    double re, im;
  };
  double c00_ = 0.0;
  int max_m_ = 0, max_n_ = 0;
  std::vector<Term> terms_;  // m > 0, or m == 0 and n > 0
};

}  // namespace magtorus
