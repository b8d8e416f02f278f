#include "latcp/greens_halfspace.hpp"

#include <cmath>

#include "latcp/cylinder_fields.hpp"

namespace latcp {

namespace {

const cplx I(0.0, 1.0);
using Packed = Eigen::Matrix<cplx, 18, 1>;

// Angular trapezoid sum at fixed k_par. kx is the vacuum normal wavenumber,
// and w the radial weight (d^2 k / kx mapped onto the radial variable).
Packed angular_sum(const HalfSpace& hs, const Vec3& r, const Vec3& rp, cplx k, double kpar, cplx kx, cplx w) {
  const cplx eps = hs.index * hs.index;
  const cplx k1x = transverse_wavenumber(eps * k * k - kpar * kpar);
  const cplx rs = (kx - k1x) / (kx + k1x);
  const cplx rp_ = (eps * kx - k1x) / (eps * kx + k1x);
  const double dy = r(1) - rp(1), dz = r(2) - rp(2);
  const double spread = kpar * std::hypot(dy, dz);
  const int N = 16 + 2 * static_cast<int>(std::ceil(spread));
  const cplx vert = std::exp(I * kx * (r(0) + rp(0)));
  Mat3c G = Mat3c::Zero(), D = Mat3c::Zero();
  for (int j = 0; j < N; ++j) {
    const double phi = 2.0 * kPi * j / N;
    const double c = std::cos(phi), s = std::sin(phi);
    const Vec3c khat(0.0, c, s);  // unit in-plane direction
    const Vec3c es(0.0, -s, c);   // khat x xhat
    const Vec3c xh(1.0, 0.0, 0.0);
    const Vec3c epp = (kpar * xh - kx * khat) / k;  // reflected (+x)
    const Vec3c epm = (kpar * xh + kx * khat) / k;  // incident (-x)
    const cplx ph = std::exp(I * kpar * (c * dy + s * dz));
    const Mat3c T = (rs * es * es.transpose() + rp_ * epp * epm.transpose()) * ph;
    G += T;
    D += (I * kpar * s) * T;
  }
  const cplx pre = (I / (8.0 * kPi * kPi)) * vert * w * (2.0 * kPi / N);
  Packed out;
  G *= pre;
  D *= pre;
  out.head<9>() = Eigen::Map<const Eigen::Matrix<cplx, 9, 1>>(G.data());
  out.tail<9>() = Eigen::Map<const Eigen::Matrix<cplx, 9, 1>>(D.data());
  return out;
}

double packed_size(const Packed& p, double k) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s = std::max(s, std::abs(p(i)));
  for (int i = 9; i < 18; ++i) s = std::max(s, std::abs(p(i)) / k);
  return s;
}

// Real frequency: propagating part in kx, evanescent part in q = Im kx.
// Imaginary frequency (k = i kappa): kx = i sqrt(kappa^2 + kpar^2), one radial integral in kpar.
Packed planar_integral(const HalfSpace& hs, const Vec3& r, const Vec3& rp, cplx k, const PlanarOptions& opts) {
  hs.validate();
  opts.quad.validate();
  if (!(r(0) > 0.0) || !(rp(0) > 0.0)) throw std::invalid_argument("planar Green tensor: points must have x > 0");
  const double h = r(0) + rp(0);
  Packed total = Packed::Zero();
  if (hs.index == cplx(1.0, 0.0)) return total;  // nothing reflects
  double scale;
  std::function<Packed(double)> tail;
  if (k.imag() == 0.0) {
    const double kr = k.real();
    scale = kr;
    // k_par dk_par / kx = -dkx on [0, k]
    auto prop = [&](double kx) { return angular_sum(hs, r, rp, k, std::sqrt(std::max(0.0, kr * kr - kx * kx)), kx, 1.0); };
    total += integrate_adaptive(prop, Interval(0.0, kr), opts.quad).value;
    // k_par dk_par / kx = -i dq with kx = i q
    tail = [&hs, &r, &rp, k, kr](double q) {
      return angular_sum(hs, r, rp, k, std::sqrt(kr * kr + q * q), cplx(0.0, q), cplx(0.0, -1.0));
    };
  } else {
    const double kap = k.imag();
    scale = kap;
    tail = [&hs, &r, &rp, k, kap](double kpar) {
      const double qx = std::sqrt(kap * kap + kpar * kpar);
      return angular_sum(hs, r, rp, k, kpar, cplx(0.0, qx), cplx(0.0, -kpar / qx));
    };
  }
  double lo = 0.0, w = std::max(scale, 1.0 / h);
  for (int it = 0;; ++it) {
    if (it > 80) throw std::runtime_error("planar Green tensor: evanescent tail did not settle");
    const Packed chunk = integrate_adaptive(tail, Interval(lo, lo + w), opts.quad).value;
    total += chunk;
    if (packed_size(chunk, scale) <= opts.tail_tol * packed_size(total, scale)) break;
    lo += w;
    w *= 2.0;
  }
  return total;
}

GreenResult unpack(const Packed& p) {
  GreenResult g;
  g.G = Eigen::Map<const Mat3c>(p.data());
  g.dzG = Eigen::Map<const Mat3c>(p.data() + 9);
  return g;
}

}  // namespace

FresnelCoefficients fresnel(cplx n, double kpar, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("fresnel: omega must be positive");
  if (!(kpar >= 0.0)) throw std::invalid_argument("fresnel: k_parallel must be non-negative");
  const double k = omega / si::c;
  const cplx eps = n * n;
  const cplx kx = transverse_wavenumber(k * k - kpar * kpar);
  const cplx k1x = transverse_wavenumber(eps * k * k - kpar * kpar);
  return {(kx - k1x) / (kx + k1x), (eps * kx - k1x) / (eps * kx + k1x)};
}

GreenResult planar_scattering_green(const HalfSpace& hs, const Vec3& r, const Vec3& rp, double omega,
                                    const PlanarOptions& opts) {
  if (!(omega > 0.0)) throw std::invalid_argument("planar Green tensor: omega must be positive");
  return unpack(planar_integral(hs, r, rp, cplx(omega / si::c, 0.0), opts));
}

double planar_lateral_force(const AtomTransition& atom, double d, const HalfSpace& hs, const PlanarOptions& opts) {
  atom.validate();
  if (!(d > 0.0)) throw std::invalid_argument("planar_lateral_force: distance must be positive");
  const Vec3 rA(d, 0.0, 0.0);
  const auto g = planar_scattering_green(hs, rA, rA, atom.omega, opts);
  const Eigen::Matrix3d imD = g.dzG.imag();
  // same contraction order as the cylinder force
  const cplx c = (atom.d01().transpose() * imD.cast<cplx>() * atom.dipole)(0, 0);
  return (2.0 * I * si::mu0 * atom.omega * atom.omega * c).real();
}

RetardedForce retarded_lateral_force(const AtomTransition& atom, double d, const HalfSpace& hs) {
  atom.validate();
  hs.validate();
  if (!(d > 0.0)) throw std::invalid_argument("retarded_lateral_force: distance must be positive");
  const double k = atom.k();
  const Vec3c d10 = atom.dipole, d01 = atom.d01();
  const double im = (d01(2) * d10(0)).imag();
  const cplx rn = (hs.index - 1.0) / (hs.index + 1.0);
  const double f = im * atom.omega * atom.omega / (8.0 * si::epsilon0 * si::c * si::c * d * d) *
                   std::sin(2.0 * d * k) * rn.real();
  return {f, d >= 2.0 * atom.wavelength()};
}

double planar_nonresonant_lateral(const AtomTransition& atom, double d, const HalfSpace& hs,
                                  const std::vector<double>& xi_grid, const PlanarOptions& opts) {
  atom.validate();
  if (xi_grid.size() < 2) throw std::invalid_argument("planar_nonresonant_lateral: need at least two xi points");
  const Vec3 rA(d, 0.0, 0.0);
  const double wkn = -atom.omega;
  std::vector<double> vals;
  for (size_t i = 0; i < xi_grid.size(); ++i) {
    const double xi = xi_grid[i];
    if (!(xi > 0.0) || (i > 0 && !(xi > xi_grid[i - 1])))
      throw std::invalid_argument("planar_nonresonant_lateral: xi grid must be positive and increasing");
    const auto g = unpack(planar_integral(hs, rA, rA, cplx(0.0, xi / si::c), opts));
    const Mat3c S = 0.5 * (g.dzG + g.dzG.transpose());
    const cplx c = (atom.dipole.transpose() * S * atom.d01())(0, 0);
    vals.push_back(xi * xi * wkn / (wkn * wkn + xi * xi) * c.real());
  }
  double integral = 0.0;
  for (size_t i = 1; i < xi_grid.size(); ++i) integral += 0.5 * (vals[i] + vals[i - 1]) * (xi_grid[i] - xi_grid[i - 1]);
  return -(2.0 * si::mu0 / kPi) * integral;
}

}  // namespace latcp
