#pragma once
// Special functions, adaptive quadrature and bracketed root finding.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace latcp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Bessel functions of integer order and complex argument
// ---------------------------------------------------------------------------

enum class BesselKind { J, Y, H1, I, K };

struct BesselValue {
  cplx value;
  cplx derivative;
};

/// Value and first derivative of an integer-order Bessel function.
/// Orders 0..64 are accepted. Throws std::domain_error at z = 0 for the
/// singular kinds (Y, H1, K) and std::overflow_error when the unscaled
/// result would leave the double range.
BesselValue bessel_eval(BesselKind kind, int order, cplx z);

/// J_0..J_nmax at z, each multiplied by exp(-|Im z|). Any nmax >= 0.
std::vector<cplx> bessel_j_scaled(int nmax, cplx z);

/// H^(1)_0..H^(1)_nmax at z, each multiplied by exp(-i z). Requires z != 0
/// and arg z in (-pi/2, pi].
std::vector<cplx> hankel1_scaled(int nmax, cplx z);

/// Derivatives from a contiguous order table f_0..f_n using
/// f_m' = f_{m-1} - (m/z) f_m and f_0' = -f_1. The table must hold at least
/// one order beyond the largest derivative requested.
std::vector<cplx> bessel_derivatives(const std::vector<cplx>& f, cplx z);

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw std::invalid_argument("Interval: require finite lo < hi");
  }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1)
      throw std::invalid_argument("QuadratureSpec: need rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1");
  }
};

template <class V>
struct Integral {
  V value;
  double error_estimate;
};

/// Thrown when the panel budget runs out; carries the best estimate.
template <class V>
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, V best, double err)
      : std::runtime_error(what), best_estimate(std::move(best)), error_estimate(err) {}
  V best_estimate;
  double error_estimate;
};

namespace detail {

inline double max_abs(double v) { return std::abs(v); }
inline double max_abs(const cplx& v) { return std::abs(v); }
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
Integral<V> gauss_kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V fc = f(c);
  V kron = fc * kWgk[7];
  V gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    V f1 = f(c - dx);
    V f2 = f(c + dx);
    V s = f1 + f2;
    kron = kron + s * kWgk[j];
    if (j % 2 == 1) gauss = gauss + s * kWg[j / 2];
  }
  V k = kron * h;
  V g = gauss * h;
  V diff = k - g;
  return {k, max_abs(diff)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over the interval.
/// V may be double, complex<double> or an Eigen column vector; for vectors
/// the tolerance test uses the largest component.
template <class F>
auto integrate_adaptive(F&& f, const Interval& interval, const QuadratureSpec& spec)
    -> Integral<std::decay_t<std::invoke_result_t<F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  spec.validate();

  struct Panel {
    double a, b;
    V value;
    double error;
  };
  auto cmp = [](const Panel& l, const Panel& r) { return l.error < r.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

  auto first = detail::gauss_kronrod15<V>(f, interval.lo, interval.hi);
  V total = first.value;
  double total_err = first.error_estimate;
  heap.push({interval.lo, interval.hi, first.value, first.error_estimate});
  int panels = 1;
  // Panels at rounding resolution are accepted as-is.
  auto unsplittable = [](double a, double b) {
    return b - a <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) ||
           b - a < 1e-280;
  };
  double frozen_err = 0.0;

  while (!heap.empty()) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * detail::max_abs(total));
    if (total_err <= target) break;
    if (panels >= spec.max_subdivisions)
      throw QuadratureFailure<V>("integrate_adaptive: no convergence within " +
                                     std::to_string(spec.max_subdivisions) + " panels",
                                 total, total_err);
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (unsplittable(p.a, p.b)) {
      frozen_err += p.error;
      total_err -= p.error;
      if (heap.empty()) break;
      continue;
    }
    auto left = detail::gauss_kronrod15<V>(f, p.a, m);
    auto right = detail::gauss_kronrod15<V>(f, m, p.b);
    total = total - p.value + left.value + right.value;
    total_err += left.error_estimate + right.error_estimate - p.error;
    heap.push({p.a, m, left.value, left.error_estimate});
    heap.push({m, p.b, right.value, right.error_estimate});
    ++panels;
  }
  // Re-sum from the panels to shed accumulated cancellation in `total`.
  if (!heap.empty()) {
    V sum = heap.top().value;
    double err = heap.top().error;
    heap.pop();
    while (!heap.empty()) {
      sum = sum + heap.top().value;
      err += heap.top().error;
      heap.pop();
    }
    total = sum;
    total_err = err;
  }
  return {total, total_err + frozen_err};
}

/// Integrates over consecutive panels [b0,b1], [b1,b2], ... and sums.
template <class F>
auto integrate_breakpoints(F&& f, const std::vector<double>& breaks, const QuadratureSpec& spec)
    -> Integral<std::decay_t<std::invoke_result_t<F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  if (breaks.size() < 2) throw std::invalid_argument("integrate_breakpoints: need two points");
  auto r = integrate_adaptive(f, Interval(breaks[0], breaks[1]), spec);
  V total = r.value;
  double err = r.error_estimate;
  for (std::size_t i = 2; i < breaks.size(); ++i) {
    auto s = integrate_adaptive(f, Interval(breaks[i - 1], breaks[i]), spec);
    total = total + s.value;
    err += s.error_estimate;
  }
  return {total, err};
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo_, double hi_)
      : std::runtime_error(what), lo(lo_), hi(hi_) {}
  double lo, hi;
};

/// Bisection down to a bracket of width <= tol, then one secant step inside
/// the final bracket. Throws BracketError without a sign change or when the
/// iteration budget runs out (carrying the last bracket).
double find_root(const std::function<double(double)>& f, const Interval& bracket, double tol);

}  // namespace latcp
