#include "magtorus/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fft_backend.hpp"

namespace magtorus {
namespace {

// Smallest alias-free grid for a band-B result, rounded up to a multiple
// of 8 to keep FFTW on friendly sizes.
int padded_grid(int band) {
  int m = 2 * band + 1;
  return ((m + 7) / 8) * 8;
}

std::size_t count_nonzero(const Field2& f) {
  std::size_t nnz = 0;
  for (const auto& c : f.raw())
    if (c.real() != 0.0 || c.imag() != 0.0) ++nnz;
  return nnz;
}

// exp(2*pi*i*k*u) for k = 0..max_k.
void phase_table(double u, int max_k, std::vector<std::complex<double>>& out) {
  out.resize(static_cast<std::size_t>(max_k) + 1);
  u -= std::floor(u);
  for (int k = 0; k <= max_k; ++k) out[k] = std::polar(1.0, kTwoPi * k * u);
}

}  // namespace

PositivityViolation::PositivityViolation(double x, double y, double value)
    : std::runtime_error("non-positive sample " + std::to_string(value) +
                         " at (" + std::to_string(x) + ", " +
                         std::to_string(y) + ")"),
      x_(x),
      y_(y),
      value_(value) {}

Field2::Field2(int band_limit) : n_(band_limit) {
  if (band_limit < 0) throw std::invalid_argument("band limit must be >= 0");
  c_.assign(static_cast<std::size_t>(side()) * side(), {0.0, 0.0});
}

Field2 Field2::constant(double value) {
  Field2 f(0);
  f.c_[0] = value;
  return f;
}

Field2 Field2::from_modes(std::span<const ModeEntry> modes, int band_limit,
                          bool one_sided) {
  Field2 f(band_limit);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : modes) {
    if (std::abs(e.m) > band_limit || std::abs(e.n) > band_limit)
      throw std::invalid_argument("mode (" + std::to_string(e.m) + ", " +
                                  std::to_string(e.n) + ") out of band " +
                                  std::to_string(band_limit));
    if (!seen.insert({e.m, e.n}).second)
      throw std::invalid_argument("duplicate mode entry");
    f.c_[f.index(e.m, e.n)] = e.c;
    if (one_sided && (e.m != 0 || e.n != 0))
      f.c_[f.index(-e.m, -e.n)] = std::conj(e.c);
  }
  if (one_sided) {
    if (std::abs(f.c_[f.index(0, 0)].imag()) != 0.0)
      throw std::invalid_argument("one-sided (0,0) mode must be real");
  } else {
    double scale = 0.0;
    for (const auto& c : f.c_) scale = std::max(scale, std::abs(c));
    if (hermitian_asymmetry(f) > 1e-14 * std::max(1.0, scale))
      throw std::invalid_argument(
          "mode list is not Hermitian-symmetric; pass one_sided=true for "
          "implied symmetrization");
  }
  return f;
}

std::complex<double> Field2::coeff(int m, int n) const {
  if (std::abs(m) > n_ || std::abs(n) > n_) return {0.0, 0.0};
  return c_[index(m, n)];
}

void Field2::set_coeff(int m, int n, std::complex<double> value) {
  if (std::abs(m) > n_ || std::abs(n) > n_)
    throw std::invalid_argument("set_coeff out of band");
  c_[index(m, n)] = value;
}

double Field2::eval(double x, double y) const {
  thread_local std::vector<std::complex<double>> ex, ey;
  phase_table(x, n_, ex);
  phase_table(y, n_, ey);
  // Real field: c00 + 2*Re(sum over the m>0 half plane and the m=0,n>0 ray).
  std::complex<double> half{0.0, 0.0};
  for (int m = 1; m <= n_; ++m) {
    std::complex<double> row{0.0, 0.0};
    for (int n = -n_; n <= n_; ++n) {
      const std::complex<double> c = c_[index(m, n)];
      if (c.real() == 0.0 && c.imag() == 0.0) continue;
      row += c * (n >= 0 ? ey[n] : std::conj(ey[-n]));
    }
    half += row * ex[m];
  }
  for (int n = 1; n <= n_; ++n) half += c_[index(0, n)] * ey[n];
  return c_[index(0, 0)].real() + 2.0 * half.real();
}

void Field2::symmetrize() {
  for (int m = 0; m <= n_; ++m)
    for (int n = -n_; n <= n_; ++n) {
      if (m == 0 && n < 0) continue;
      const auto a = c_[index(m, n)];
      const auto b = std::conj(c_[index(-m, -n)]);
      const auto avg = 0.5 * (a + b);
      c_[index(m, n)] = avg;
      c_[index(-m, -n)] = std::conj(avg);
    }
}

Field2 dx(const Field2& f) {
  const int N = f.band_limit();
  Field2 out(N);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      out.set_coeff(m, n, std::complex<double>(0.0, kTwoPi * m) * f.coeff(m, n));
  return out;
}

Field2 dy(const Field2& f) {
  const int N = f.band_limit();
  Field2 out(N);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      out.set_coeff(m, n, std::complex<double>(0.0, kTwoPi * n) * f.coeff(m, n));
  return out;
}

namespace {

Field2 mul_direct(const Field2& a, const Field2& b) {
  const int nc = a.band_limit() + b.band_limit();
  Field2 out(nc);
  const int na = a.band_limit(), nb = b.band_limit();
  for (int ma = -na; ma <= na; ++ma)
    for (int va = -na; va <= na; ++va) {
      const auto ca = a.coeff(ma, va);
      if (ca.real() == 0.0 && ca.imag() == 0.0) continue;
      for (int mb = -nb; mb <= nb; ++mb)
        for (int vb = -nb; vb <= nb; ++vb) {
          const auto cb = b.coeff(mb, vb);
          if (cb.real() == 0.0 && cb.imag() == 0.0) continue;
          out.set_coeff(ma + mb, va + vb,
                        out.coeff(ma + mb, va + vb) + ca * cb);
        }
    }
  return out;
}

// Scatter coefficients into an M x M spectral buffer at wrapped indices.
void scatter(const Field2& f, std::vector<std::complex<double>>& buf, int M) {
  const int N = f.band_limit();
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      const int i = (m % M + M) % M;
      const int j = (n % M + M) % M;
      buf[static_cast<std::size_t>(i) * M + j] += f.coeff(m, n);
    }
}

Field2 mul_fft(const Field2& a, const Field2& b) {
  const int nc = a.band_limit() + b.band_limit();
  // The content band decides the grid; modes beyond it are exactly zero.
  const int nc_eff = effective_band(a) + effective_band(b);
  const int M = padded_grid(nc_eff);
  const std::size_t total = static_cast<std::size_t>(M) * M;
  std::vector<std::complex<double>> ga(total), gb(total);
  scatter(a, ga, M);
  scatter(b, gb, M);
  detail::dft2_backward(ga.data(), M);  // spectrum -> samples
  detail::dft2_backward(gb.data(), M);
  for (std::size_t i = 0; i < total; ++i) ga[i] *= gb[i];
  detail::dft2_forward(ga.data(), M);
  Field2 out(nc);
  const double scale = 1.0 / total;
  for (int m = -nc_eff; m <= nc_eff; ++m)
    for (int n = -nc_eff; n <= nc_eff; ++n) {
      const int i = (m % M + M) % M;
      const int j = (n % M + M) % M;
      out.set_coeff(m, n, ga[static_cast<std::size_t>(i) * M + j] * scale);
    }
  out.symmetrize();
  return out;
}

}  // namespace

Field2 mul(const Field2& a, const Field2& b, MulPath path) {
  switch (path) {
    case MulPath::DirectConvolution:
      return mul_direct(a, b);
    case MulPath::Fft:
      return mul_fft(a, b);
    case MulPath::Auto:
      break;
  }
  const std::size_t work = count_nonzero(a) * count_nonzero(b);
  const int M = padded_grid(a.band_limit() + b.band_limit());
  const std::size_t fft_work = 6 * static_cast<std::size_t>(M) * M;
  return work <= fft_work ? mul_direct(a, b) : mul_fft(a, b);
}

Field2 linear_combine(std::span<const std::pair<double, const Field2*>> terms) {
  int N = 0;
  for (const auto& [s, f] : terms) N = std::max(N, f->band_limit());
  Field2 out(N);
  for (const auto& [s, f] : terms) {
    const int nf = f->band_limit();
    for (int m = -nf; m <= nf; ++m)
      for (int n = -nf; n <= nf; ++n)
        out.set_coeff(m, n, out.coeff(m, n) + s * f->coeff(m, n));
  }
  return out;
}

Field2 operator+(const Field2& a, const Field2& b) {
  const std::pair<double, const Field2*> terms[] = {{1.0, &a}, {1.0, &b}};
  return linear_combine(terms);
}

Field2 operator-(const Field2& a, const Field2& b) {
  const std::pair<double, const Field2*> terms[] = {{1.0, &a}, {-1.0, &b}};
  return linear_combine(terms);
}

Field2 operator*(double s, const Field2& f) {
  const std::pair<double, const Field2*> terms[] = {{s, &f}};
  return linear_combine(terms);
}

TruncationResult truncate(const Field2& f, int band_limit) {
  if (band_limit >= f.band_limit()) return {f, 0.0};
  Field2 out(band_limit);
  double lost = 0.0;
  const int N = f.band_limit();
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      const auto c = f.coeff(m, n);
      if (std::abs(m) <= band_limit && std::abs(n) <= band_limit)
        out.set_coeff(m, n, c);
      else
        lost += std::norm(c);
    }
  return {std::move(out), std::sqrt(lost)};
}

int effective_band(const Field2& f) {
  const int N = f.band_limit();
  int band = 0;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      const auto c = f.coeff(m, n);
      if (c.real() != 0.0 || c.imag() != 0.0)
        band = std::max({band, std::abs(m), std::abs(n)});
    }
  return band;
}

Field2 compact(const Field2& f) { return truncate(f, effective_band(f)).field; }

Field2 shift(const Field2& f, double sx, double sy) {
  const int N = f.band_limit();
  Field2 out(N);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      out.set_coeff(m, n,
                    f.coeff(m, n) * std::polar(1.0, -kTwoPi * (m * sx + n * sy)));
  out.symmetrize();
  return out;
}

GridSampling sample(const Field2& f, int resolution) {
  const int N = effective_band(f);
  if (resolution < 2 * N + 1)
    throw std::invalid_argument("grid resolution below 2N+1 loses modes");
  const std::size_t total = static_cast<std::size_t>(resolution) * resolution;
  std::vector<std::complex<double>> buf(total);
  scatter(f, buf, resolution);
  detail::dft2_backward(buf.data(), resolution);
  GridSampling g;
  g.resolution = resolution;
  g.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) g.values[i] = buf[i].real();
  return g;
}

Field2 field_from_grid(const GridSampling& g, int band_limit) {
  const int M = g.resolution;
  if (M < 2 * band_limit + 1)
    throw std::invalid_argument("band limit too large for grid");
  const std::size_t total = static_cast<std::size_t>(M) * M;
  std::vector<std::complex<double>> buf(total);
  for (std::size_t i = 0; i < total; ++i) buf[i] = g.values[i];
  detail::dft2_forward(buf.data(), M);
  Field2 out(band_limit);
  const double scale = 1.0 / total;
  for (int m = -band_limit; m <= band_limit; ++m)
    for (int n = -band_limit; n <= band_limit; ++n) {
      const int i = (m % M + M) % M;
      const int j = (n % M + M) % M;
      out.set_coeff(m, n, buf[static_cast<std::size_t>(i) * M + j] * scale);
    }
  out.symmetrize();
  return out;
}

Field2 sqrt_field(const Field2& f, int resolution) {
  if (resolution < 3 * effective_band(f))
    throw std::invalid_argument("sqrt_field needs M >= 3N headroom");
  GridSampling g = sample(f, resolution);
  const int M = g.resolution;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      double& v = g.values[static_cast<std::size_t>(i) * M + j];
      if (v <= 0.0)
        throw PositivityViolation(static_cast<double>(i) / M,
                                  static_cast<double>(j) / M, v);
      v = std::sqrt(v);
    }
  return field_from_grid(g, M / 2 - 1);
}

Field2 divide_on_grid(const Field2& num, const Field2& den, int resolution) {
  if (resolution < 2 * std::max(effective_band(num), effective_band(den)) + 1)
    throw std::invalid_argument("divide_on_grid cannot resolve its inputs");
  GridSampling gn = sample(num, resolution);
  GridSampling gd = sample(den, resolution);
  const int M = gn.resolution;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * M + j;
      if (gd.values[k] <= 0.0)
        throw PositivityViolation(static_cast<double>(i) / M,
                                  static_cast<double>(j) / M, gd.values[k]);
      gn.values[k] /= gd.values[k];
    }
  return field_from_grid(gn, M / 2 - 1);
}

double min_on_grid(const Field2& f, int resolution) {
  GridSampling g = sample(f, std::max(resolution, 2 * f.band_limit() + 1));
  return *std::min_element(g.values.begin(), g.values.end());
}

double mean(const Field2& f) { return f.coeff(0, 0).real(); }

double max_norm(const Field2& f, int resolution) {
  GridSampling g = sample(f, std::max(resolution, 2 * f.band_limit() + 1));
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const Field2& f) { return spectral_mass(f); }

double hermitian_asymmetry(const Field2& f) {
  const int N = f.band_limit();
  double worst = 0.0;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      worst = std::max(worst,
                       std::abs(f.coeff(m, n) - std::conj(f.coeff(-m, -n))));
  return worst;
}

double spectral_mass(const Field2& f) {
  double s = 0.0;
  for (const auto& c : f.raw()) s += std::norm(c);
  return std::sqrt(s);
}

MassSplit split_mass(const Field2& f) {
  const int N = f.band_limit();
  double sep = 0.0, mixed = 0.0;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      const double w = std::norm(f.coeff(m, n));
      (m == 0 || n == 0 ? sep : mixed) += w;
    }
  return {std::sqrt(sep), std::sqrt(mixed)};
}

CompiledField::CompiledField(const Field2& f) {
  c00_ = f.coeff(0, 0).real();
  const int N = f.band_limit();
  for (int m = 0; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      if (m == 0 && n <= 0) continue;
      const auto c = f.coeff(m, n);
      if (c.real() == 0.0 && c.imag() == 0.0) continue;
      terms_.push_back({m, n, c.real(), c.imag()});
      max_m_ = std::max(max_m_, m);
      max_n_ = std::max(max_n_, std::abs(n));
    }
}

double CompiledField::eval(double x, double y) const {
  thread_local std::vector<std::complex<double>> ex, ey;
  phase_table(x, max_m_, ex);
  phase_table(y, max_n_, ey);
  double acc = 0.0;
  for (const auto& t : terms_) {
    const std::complex<double> e =
        ex[t.m] * (t.n >= 0 ? ey[t.n] : std::conj(ey[-t.n]));
    acc += t.re * e.real() - t.im * e.imag();
  }
  return c00_ + 2.0 * acc;
}

}  // namespace magtorus
