#include "latcp/fiber_modes.hpp"

#include <cmath>

namespace latcp {

namespace {

const cplx I(0.0, 1.0);

// Signed-order lookup: Z_{-m} = (-1)^m Z_m, same for the derivative.
RadialFunction signed_order(const std::vector<cplx>& v, const std::vector<cplx>& d, int m) {
  const int a = std::abs(m);
  const double s = (m < 0 && (a % 2)) ? -1.0 : 1.0;
  return {s * v[a], s * d[a]};
}

// H1_m(i kappa rho) for m in 0..2, underflowing quietly to zero far out.
std::vector<cplx> hankel_imag_axis(double x) {
  auto v = hankel1_scaled(2, cplx(0.0, x));
  const double s = std::exp(-x);
  for (auto& c : v) c *= s;
  return v;
}

struct GuidedGeometry {
  double k, beta, h, kappa;
  cplx eps;
};

GuidedGeometry guided_geometry(const Fiber& fiber, double omega, double beta) {
  const double k = omega / si::c;
  const double n = fiber.index.real();
  return {k, beta, std::sqrt(n * n * k * k - beta * beta), std::sqrt(beta * beta - k * k), cplx(n * n, 0.0)};
}

HarmonicField guided_field(const Fiber& fiber, const GuidedGeometry& g, int f, int p,
                           const Eigen::Vector4cd& c, double r) {
  const cplx kz = static_cast<double>(f) * g.beta;
  if (r < fiber.radius) {
    // m = +-1 fields are finite on the axis; step off it to avoid 1/r.
    const double rr = std::max(r, 1e-12 * fiber.radius);
    auto j = bessel_j_orders(2, g.h * rr);
    auto dj = bessel_derivatives(j, g.h * rr);
    return harmonic_field({g.k, kz, p, g.eps, g.h}, c(0), c(1), signed_order(j, dj, p), rr);
  }
  auto hk = hankel_imag_axis(g.kappa * r);
  auto dh = bessel_derivatives(hk, cplx(0.0, g.kappa * r));
  return harmonic_field({g.k, kz, p, 1.0, cplx(0.0, g.kappa)}, c(2), c(3), signed_order(hk, dh, p), r);
}

Eigen::Vector4cd guided_coefficients(const Fiber& fiber, const GuidedGeometry& g, int f, int p) {
  const double R = fiber.radius;
  auto j = bessel_j_orders(2, g.h * R);
  auto dj = bessel_derivatives(j, g.h * R);
  auto hk = hankel_imag_axis(g.kappa * R);
  auto dh = bessel_derivatives(hk, cplx(0.0, g.kappa * R));
  const cplx kz = static_cast<double>(f) * g.beta;
  const Harmonic hin{g.k, kz, p, g.eps, g.h};
  const Harmonic hout{g.k, kz, p, 1.0, cplx(0.0, g.kappa)};
  const auto zi = signed_order(j, dj, p);
  const auto zo = signed_order(hk, dh, p);

  Eigen::Matrix4cd M;
  M.col(0) = tangential(harmonic_field(hin, 1.0, 0.0, zi, R));
  M.col(1) = tangential(harmonic_field(hin, 0.0, 1.0, zi, R));
  M.col(2) = -tangential(harmonic_field(hout, 1.0, 0.0, zo, R));
  M.col(3) = -tangential(harmonic_field(hout, 0.0, 1.0, zo, R));
  // column equilibration so the singular value test is scale free
  Eigen::Vector4d scale;
  for (int i = 0; i < 4; ++i) {
    scale(i) = M.col(i).norm();
    M.col(i) /= scale(i);
  }
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(3) > 1e-6 * s(0))
    throw GeometryError("guided mode: boundary matrix not singular at beta (sigma_min/sigma_max = " +
                        std::to_string(s(3) / s(0)) + ")");
  Eigen::Vector4cd c = svd.matrixV().col(3);
  for (int i = 0; i < 4; ++i) c(i) /= scale(i);

  // 2 pi Int n^2 |e|^2 r dr = 1
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  auto dens = [&](double r, double w) {
    return 2.0 * kPi * w * guided_field(fiber, g, f, p, c, r).e.squaredNorm() * r;
  };
  const double nn = g.eps.real();
  const double inner = integrate_adaptive([&](double r) { return dens(r, nn); }, Interval(0.0, R), spec).value;
  const double outer =
      integrate_adaptive([&](double r) { return dens(r, 1.0); }, Interval(R, R + 60.0 / g.kappa), spec).value;
  c /= std::sqrt(inner + outer);
  // fix the overall phase: E_z inside real and positive
  c *= std::polar(1.0, -std::arg(c(0)));
  return c;
}

}  // namespace

double he11_characteristic(const Fiber& fiber, double omega, double beta) {
  const double k = omega / si::c;
  const double n = fiber.index.real();
  const double R = fiber.radius;
  const double u = R * std::sqrt(n * n * k * k - beta * beta);
  const double w = R * std::sqrt(beta * beta - k * k);
  const auto j = bessel_eval(BesselKind::J, 1, u);
  const auto kk = bessel_eval(BesselKind::K, 1, w);
  const double J = j.value.real(), Jp = j.derivative.real();
  const double Y = kk.derivative.real() / (w * kk.value.real());
  const double t = 1.0 / (u * u) + 1.0 / (w * w);
  const double b = beta / k;
  return (Jp + Y * u * J) * (n * n * Jp + Y * u * J) - b * b * t * t * u * u * J * J;
}

double solve_beta(const Fiber& fiber, double omega) {
  fiber.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("solve_beta: omega must be positive");
  const double k = omega / si::c;
  const double n = fiber.index.real();
  if (!(n > 1.0)) throw GeometryError("solve_beta: no guided mode without index contrast");
  // work in x = beta / k; F has a trivial zero at x = n, so stay just inside
  auto F = [&](double x) { return he11_characteristic(fiber, omega, x * k); };
  const double lo = 1.0 + 1e-9, hi = n * (1.0 - 1e-9);
  const int N = 400;
  double x1 = hi, f1 = F(hi);
  for (int i = N - 1; i >= 0; --i) {
    const double x0 = lo + (hi - lo) * i / N;
    const double f0 = F(x0);
    if ((f0 < 0.0) != (f1 < 0.0)) return k * find_root(F, Interval(x0, x1), 1e-15);
    x1 = x0;
    f1 = f0;
  }
  throw GeometryError("solve_beta: no HE11 root in (k, Re(n) k)");
}

GuidedMode solve_guided_mode(const Fiber& fiber, double omega) {
  const double k = omega / si::c;
  const double n = fiber.index.real();
  GuidedMode m;
  m.omega = omega;
  m.beta = solve_beta(fiber, omega);
  // centered difference, one Richardson step
  const double h = 2e-3 * omega;
  auto D = [&](double s) { return (solve_beta(fiber, omega + s) - solve_beta(fiber, omega - s)) / (2.0 * s); };
  const double d1 = D(h), d2 = D(h / 2);
  m.beta_prime = (4.0 * d2 - d1) / 3.0;
  m.v_number = k * fiber.radius * std::sqrt(n * n - 1.0);
  if (m.v_number >= 2.404825557695773) {
    m.single_mode = false;
    m.warning = "V = " + std::to_string(m.v_number) + " exceeds the second-mode cutoff 2.405";
  }
  m.coeffs = guided_coefficients(fiber, guided_geometry(fiber, omega, m.beta), m.f, m.p);
  return m;
}

GuidedMode guided_mode_variant(const Fiber& fiber, const GuidedMode& mode, int f, int p) {
  if ((f != 1 && f != -1) || (p != 1 && p != -1))
    throw std::invalid_argument("guided_mode_variant: f and p must be +1 or -1");
  GuidedMode m = mode;
  m.f = f;
  m.p = p;
  m.coeffs = guided_coefficients(fiber, guided_geometry(fiber, mode.omega, mode.beta), f, p);
  return m;
}

ModeProfile guided_profile(const Fiber& fiber, const GuidedMode& mode, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("guided_profile: r must be non-negative");
  const auto g = guided_geometry(fiber, mode.omega, mode.beta);
  return {guided_field(fiber, g, mode.f, mode.p, mode.coeffs, r).e};
}

// ---------------------------------------------------------------------------

RadiationSlice::RadiationSlice(const Fiber& fiber, double omega, double kz, double r, int mmax)
    : omega_(omega), k_(omega / si::c), kz_(kz), r_(r), R_(fiber.radius), mmax_(mmax) {
  if (std::abs(kz) > k_) throw std::domain_error("radiation mode: evanescent index requested (|k_z| > omega/c)");
  if (std::abs(kz) == k_) throw std::domain_error("radiation mode: grazing index |k_z| = omega/c has q = 0");
  if (mmax < 0) throw std::invalid_argument("RadiationSlice: mmax must be non-negative");
  fiber.validate();
  if (!(r > 0.0)) throw std::invalid_argument("RadiationSlice: r must be positive");
  const double n = fiber.index.real();
  eps_ = n * n;
  h_ = std::sqrt(n * n * k_ * k_ - kz * kz);
  q_ = std::sqrt(k_ * k_ - kz * kz);

  auto jy = [&](double x, std::vector<cplx>& j, std::vector<cplx>& dj, std::vector<cplx>& y,
                std::vector<cplx>& dy) {
    j = bessel_j_orders(mmax + 1, x);
    auto hk = hankel1_orders(mmax + 1, x);
    y.resize(j.size());
    for (size_t i = 0; i < j.size(); ++i) y[i] = (hk[i] - j[i]) / I;
    dj = bessel_derivatives(j, x);
    dy = bessel_derivatives(y, x);
  };
  jh_ = bessel_j_orders(mmax + 1, h_ * R_);
  djh_ = bessel_derivatives(jh_, h_ * R_);
  jy(q_ * R_, jq_, djq_, yq_, dyq_);
  if (r >= R_) {
    jy(q_ * r, jr_, djr_, yr_, dyr_);
  } else {
    jr_ = bessel_j_orders(mmax + 1, h_ * r);
    djr_ = bessel_derivatives(jr_, h_ * r);
  }
}

RadialFunction RadiationSlice::pick(const std::vector<cplx>& v, const std::vector<cplx>& d, int m) const {
  return signed_order(v, d, m);
}

RadiationSlice::Order RadiationSlice::order(int m) const {
  if (std::abs(m) > mmax_) throw std::out_of_range("RadiationSlice: order beyond table");
  const Harmonic hin{k_, kz_, m, eps_, h_};
  const Harmonic hout{k_, kz_, m, 1.0, q_};
  const auto zi = pick(jh_, djh_, m);
  const auto zj = pick(jq_, djq_, m);
  const auto zy = pick(yq_, dyq_, m);
  if (!std::isfinite(std::abs(zy.value)) || !std::isfinite(std::abs(zy.derivative)))
    throw std::overflow_error("RadiationSlice: Y_m(qR) overflows at m = " + std::to_string(m));

  Eigen::Matrix<cplx, 4, 2> Mint;
  Mint.col(0) = tangential(harmonic_field(hin, 1.0, 0.0, zi, R_));
  Mint.col(1) = tangential(harmonic_field(hin, 0.0, 1.0, zi, R_));
  Eigen::Matrix4cd Mext;
  Mext.col(0) = tangential(harmonic_field(hout, 1.0, 0.0, zj, R_));
  Mext.col(1) = tangential(harmonic_field(hout, 1.0, 0.0, zy, R_));
  Mext.col(2) = tangential(harmonic_field(hout, 0.0, 1.0, zj, R_));
  Mext.col(3) = tangential(harmonic_field(hout, 0.0, 1.0, zy, R_));
  Eigen::Vector4d scale;
  for (int i = 0; i < 4; ++i) {
    scale(i) = Mext.col(i).norm();
    Mext.col(i) /= scale(i);
  }
  Eigen::Matrix<cplx, 4, 2> T = Mext.partialPivLu().solve(Mint);
  for (int i = 0; i < 4; ++i) T.row(i) /= scale(i);

  Order o;
  o.metric = (2.0 * kPi * omega_ / (q_ * q_)) * (T.adjoint() * T);
  if (r_ < R_) {
    const auto z = pick(jr_, djr_, m);
    o.fields.col(0) = harmonic_field(hin, 1.0, 0.0, z, r_).e;
    o.fields.col(1) = harmonic_field(hin, 0.0, 1.0, z, r_).e;
  } else {
    const auto rj = pick(jr_, djr_, m);
    const auto ry = pick(yr_, dyr_, m);
    for (int c = 0; c < 2; ++c) {
      o.fields.col(c) = harmonic_field(hout, T(0, c), T(2, c), rj, r_).e +
                        harmonic_field(hout, T(1, c), T(3, c), ry, r_).e;
    }
  }
  return o;
}

double RadiationSlice::coupling(int m, const Vec3c& d) const {
  const auto o = order(m);
  const Eigen::Matrix<cplx, 1, 2> g = d.transpose() * o.fields;
  const cplx v = (g * o.metric.inverse() * g.adjoint())(0, 0);
  return v.real();
}

ModeProfile radiation_profile(const Fiber& fiber, const RadiationModeIndex& idx, double r) {
  if (idx.p != 1 && idx.p != -1) throw std::invalid_argument("radiation_profile: p must be +1 or -1");
  RadiationSlice s(fiber, idx.omega, idx.kz, r, std::abs(idx.m));
  const auto o = s.order(idx.m);
  const auto& N = o.metric;
  Eigen::Vector2cd c(1.0 / std::sqrt(N(0, 0).real()), 0.0);
  if (idx.p == -1) {
    Eigen::Vector2cd v(0.0, 1.0);
    v -= c * (c.adjoint() * N * v)(0, 0);
    c = v / std::sqrt((v.adjoint() * N * v)(0, 0).real());
  }
  return {o.fields * c};
}

}  // namespace latcp
