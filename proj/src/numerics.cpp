#include "latcp/numerics.hpp"

#include <limits>

namespace latcp {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr cplx kI{0.0, 1.0};
// exp() of anything above this leaves the double range.
constexpr double kMaxExponent = 700.0;

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Unscaled J_0..J_nmax for |z| < 2 (used by the Neumann series only).
std::vector<cplx> small_j(int nmax, cplx z) {
  auto j = bessel_j_scaled(nmax, z);
  const double s = std::exp(std::abs(z.imag()));
  for (auto& v : j) v *= s;
  return j;
}

// H^(1)_0 and H^(1)_1 for |z| < 2 via Y from the Neumann series.
std::array<cplx, 2> hankel01_small(cplx z) {
  const auto j = small_j(40, z);
  cplx sum = 0.0;
  for (int k = 1; 2 * k <= 40; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * j[2 * k] / static_cast<double>(k);
  }
  const cplx y0 = (2.0 / kPi) * (std::log(z / 2.0) + kEulerGamma) * j[0] - (4.0 / kPi) * sum;
  // Wronskian; J_0 has no zeros inside |z| < 2.4.
  const cplx y1 = (j[1] * y0 - 2.0 / (kPi * z)) / j[0];
  return {j[0] + kI * y0, j[1] + kI * y1};
}

// Steed's continued fraction for exp(w) K_0(w), exp(w) K_1(w), |w| >= 2.
std::array<cplx, 2> bessel_k01_scaled_cf(cplx w) {
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  cplx b = 2.0 * (1.0 + w);
  cplx d = 1.0 / b;
  cplx h = d;
  cplx delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  int i = 1;
  for (; i < max_iter; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps * std::abs(s)) break;
  }
  if (i >= max_iter) throw std::runtime_error("bessel K continued fraction did not converge");
  h = a1 * h;
  const cplx k0 = std::sqrt(kPi / (2.0 * w)) / s;
  const cplx k1 = k0 * (w + 0.5 - h) / w;
  return {k0, k1};
}

}  // namespace

std::vector<cplx> bessel_j_scaled(int nmax, cplx z) {
  if (nmax < 0) throw std::invalid_argument("bessel_j_scaled: nmax < 0");
  std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  const double az = std::abs(z);
  if (az == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double a = std::max(static_cast<double>(nmax), az);
  const int start = 2 * static_cast<int>((a + 30.0 + 4.0 * std::sqrt(a)) / 2.0) + 2;
  std::vector<cplx> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-30;
  const cplx two_over_z = 2.0 / z;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = static_cast<double>(k) * two_over_z * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e250) {
      for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-250;
    }
  }
  // Normalise with exp(-+ i z) = J_0 + 2 sum (-+i)^k J_k, choosing the sign
  // for which the left side is the large exponential (no cancellation).
  const bool upper = z.imag() >= 0.0;
  cplx sum = f[0];
  cplx phase = 1.0;
  const cplx step = upper ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  for (int k = 1; k <= start; ++k) {
    phase *= step;
    sum += 2.0 * phase * f[k];
  }
  const cplx target = upper ? std::exp(cplx(0.0, -z.real())) : std::exp(cplx(0.0, z.real()));
  const cplx scale = target / sum;
  for (int k = 0; k <= nmax; ++k) out[k] = f[k] * scale;
  return out;
}

std::vector<cplx> hankel1_scaled(int nmax, cplx z) {
  if (nmax < 0) throw std::invalid_argument("hankel1_scaled: nmax < 0");
  if (z == cplx(0.0, 0.0)) throw std::domain_error("hankel1_scaled: z = 0");
  std::vector<cplx> h(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
  if (std::abs(z) < 2.0) {
    const auto h01 = hankel01_small(z);
    const cplx s = std::exp(-kI * z);
    h[0] = h01[0] * s;
    h[1] = h01[1] * s;
  } else {
    const auto k01 = bessel_k01_scaled_cf(-kI * z);
    // H1_n(z) = (2/pi) i^{-n-1} K_n(-i z), and exp(-i z) = exp(w).
    h[0] = (2.0 / kPi) * ipow(-1) * k01[0];
    h[1] = (2.0 / kPi) * ipow(-2) * k01[1];
  }
  for (int m = 1; m < nmax; ++m) h[m + 1] = (2.0 * m / z) * h[m] - h[m - 1];
  h.resize(static_cast<std::size_t>(nmax) + 1);
  return h;
}

std::vector<cplx> bessel_derivatives(const std::vector<cplx>& f, cplx z) {
  if (f.size() < 2) throw std::invalid_argument("bessel_derivatives: need two orders");
  std::vector<cplx> d(f.size() - 1);
  d[0] = -f[1];
  for (std::size_t m = 1; m < d.size(); ++m) d[m] = f[m - 1] - (static_cast<double>(m) / z) * f[m];
  return d;
}

BesselValue bessel_eval(BesselKind kind, int order, cplx z) {
  if (order < 0 || order > 64) throw std::domain_error("bessel_eval: order outside 0..64");
  const bool singular = kind == BesselKind::Y || kind == BesselKind::H1 || kind == BesselKind::K;
  if (singular && z == cplx(0.0, 0.0)) throw std::domain_error("bessel_eval: singular kind at z = 0");

  auto unscale = [](double exponent) {
    if (std::abs(exponent) > kMaxExponent) throw std::overflow_error("bessel_eval: result outside double range");
    return std::exp(exponent);
  };

  if (z == cplx(0.0, 0.0)) {
    // J and I at the origin.
    const cplx v = order == 0 ? 1.0 : 0.0;
    const cplx d = order == 1 ? 0.5 : 0.0;
    return {v, d};
  }

  switch (kind) {
    case BesselKind::J: {
      auto j = bessel_j_scaled(order + 1, z);
      const auto dj = bessel_derivatives(j, z);
      const double s = unscale(std::abs(z.imag()));
      return {j[order] * s, dj[order] * s};
    }
    case BesselKind::H1: {
      auto h = hankel1_scaled(order + 1, z);
      const auto dh = bessel_derivatives(h, z);
      const cplx e = -kI * z;  // H = Hs * exp(i z)
      const cplx s = unscale((-e).real()) * std::exp(cplx(0.0, (-e).imag()));
      return {h[order] * s, dh[order] * s};
    }
    case BesselKind::Y: {
      const auto j = bessel_eval(BesselKind::J, order, z);
      const auto h = bessel_eval(BesselKind::H1, order, z);
      return {-kI * (h.value - j.value), -kI * (h.derivative - j.derivative)};
    }
    case BesselKind::I: {
      // I_n(z) = i^{-n} J_n(i z)
      const auto j = bessel_eval(BesselKind::J, order, kI * z);
      return {ipow(-order) * j.value, ipow(1 - order) * j.derivative};
    }
    case BesselKind::K: {
      // K_n(z) = (pi/2) i^{n+1} H1_n(i z)
      const auto h = bessel_eval(BesselKind::H1, order, kI * z);
      return {(kPi / 2.0) * ipow(order + 1) * h.value, (kPi / 2.0) * ipow(order + 2) * h.derivative};
    }
  }
  throw std::logic_error("bessel_eval: unknown kind");
}

double find_root(const std::function<double(double)>& f, const Interval& bracket, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
  double lo = bracket.lo, hi = bracket.hi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) throw BracketError("find_root: no sign change on bracket", lo, hi);
  constexpr int max_iter = 400;
  int it = 0;
  while (hi - lo > tol) {
    if (++it > max_iter) throw BracketError("find_root: iteration limit", lo, hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant polish, kept only if it stays inside the final bracket.
  const double x = lo - flo * (hi - lo) / (fhi - flo);
  if (x > lo && x < hi && std::isfinite(x)) return x;
  return 0.5 * (lo + hi);
}

}  // namespace latcp
