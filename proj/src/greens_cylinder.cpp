#include "latcp/greens_cylinder.hpp"

#include <cmath>

#include "latcp/cylinder_fields.hpp"

namespace latcp {

namespace {

const cplx I(0.0, 1.0);

using Packed = Eigen::Matrix<cplx, 18, 1>;  // G then dG/dz, column-major

RadialFunction signed_order(const std::vector<cplx>& v, const std::vector<cplx>& d, int m) {
  const int a = std::abs(m);
  const double s = (m < 0 && (a % 2)) ? -1.0 : 1.0;
  return {s * v[a], s * d[a]};
}

Eigen::Matrix3d cyl_to_cart(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Eigen::Matrix3d R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

struct Cyl {
  double rho, phi, z;
};

Cyl to_cyl(const Vec3& r) { return {std::hypot(r(0), r(1)), std::atan2(r(1), r(0)), r(2)}; }

// Per-order Bessel data at one (k, k_z), kept as ratios so that no raw
// high-order value (which would under- or overflow) is ever formed.
//   zin  : interior J_m(k1 R) pair, arbitrary scale
//   ljo  : J_m'/J_m at k_rho R          lho : H_m'/H_m at k_rho R
//   P    : J_m(k_rho R) H_m(k_rho R)
//   qo, dqo : H_m(k_rho rho) / H_m(k_rho R) and H_m'(k_rho rho) / H_m(k_rho R)
//   qs, dqs : same at the source radius
struct Tables {
  int M = -1;
  std::vector<RadialFunction> zin;
  std::vector<cplx> ljo, lho, P, qo, dqo, qs, dqs;
};

// r_m = J_m / J_{m-1} for m = 1..M+1 by backward recurrence (minimal solution).
std::vector<cplx> j_ratios(int M, cplx z) {
  const int N = M + 40 + static_cast<int>(2.0 * std::abs(z));
  std::vector<cplx> r(M + 2, 0.0);
  cplx next = 0.0;
  for (int m = N; m >= 1; --m) {
    const cplx cur = z / (2.0 * m - z * next);
    if (m <= M + 1) r[m] = cur;
    next = cur;
  }
  return r;
}

// s_m = H_m / H_{m-1} for m = 1..M+1 by forward recurrence (dominant solution).
std::vector<cplx> h_ratios(int M, cplx z) {
  const auto h = hankel1_scaled(1, z);
  std::vector<cplx> s(M + 2, 0.0);
  s[1] = h[1] / h[0];
  for (int m = 1; m <= M; ++m) s[m + 1] = 2.0 * m / z - 1.0 / s[m];
  return s;
}

class Kernel {
 public:
  Kernel(const Fiber& fiber, const Vec3& r, const Vec3& rp, cplx k, const GreenOptions& opts)
      : R_(fiber.radius), eps_(fiber.index * fiber.index), k_(k), obs_(to_cyl(r)), src_(to_cyl(rp)), opts_(opts) {
    if (!(obs_.rho > R_) || !(src_.rho > R_))
      throw std::invalid_argument("scattering Green tensor: both points must lie outside the cylinder");
    Cobs_ = cyl_to_cart(obs_.phi);
    Csrc_ = cyl_to_cart(src_.phi).transpose();
  }

  Packed operator()(cplx kz) const {
    const cplx krho = transverse_wavenumber(k_ * k_ - kz * kz);
    const cplx k1rho = transverse_wavenumber(eps_ * k_ * k_ - kz * kz);
    const double rmax = std::max(obs_.rho, src_.rho);
    int M = std::min(opts_.m_max, std::max(8, static_cast<int>(std::ceil(std::abs(krho) * rmax)) + 15));
    for (;;) {
      Packed out;
      if (sum_orders(kz, krho, k1rho, M, out)) return out;
      if (M >= opts_.m_max)
        throw std::runtime_error("scattering Green tensor: m-sum not converged at m_max = " +
                                 std::to_string(M) + " for k_z/k = (" + std::to_string((kz / k_).real()) + ", " +
                                 std::to_string((kz / k_).imag()) + ")");
      M = std::min(opts_.m_max, 2 * M);
    }
  }

 private:
  Tables tables(cplx krho, cplx k1rho, int M) const {
    Tables t;
    t.M = M;
    const cplx zi = k1rho * R_, zo = krho * R_;
    const auto j0i = bessel_j_scaled(1, zi);
    const auto ri = j_ratios(M, zi);
    t.zin.resize(M + 1);
    t.zin[0] = {j0i[0], -j0i[1]};
    for (int m = 1; m <= M; ++m) {
      const cplx r = ri[m];
      t.zin[m] = std::abs(r) <= 1.0 ? RadialFunction{r, 1.0 - static_cast<double>(m) * r / zi}
                                    : RadialFunction{1.0, 1.0 / r - static_cast<double>(m) / zi};
    }

    const auto ro = j_ratios(M, zo);
    const auto so = h_ratios(M, zo);
    const auto j0o = bessel_j_scaled(1, zo);
    const auto h0o = hankel1_scaled(1, zo);
    t.ljo.resize(M + 1);
    t.lho.resize(M + 1);
    t.P.resize(M + 1);
    t.ljo[0] = -j0o[1] / j0o[0];
    t.lho[0] = -h0o[1] / h0o[0];
    // exp(|Im z|) exp(iz) undoes both scalings; |.| = 1 for Im z >= 0
    t.P[0] = j0o[0] * h0o[0] * std::exp(std::abs(zo.imag()) + I * zo);
    for (int m = 1; m <= M; ++m) {
      t.ljo[m] = 1.0 / ro[m] - static_cast<double>(m) / zo;
      t.lho[m] = 1.0 / so[m] - static_cast<double>(m) / zo;
      t.P[m] = t.P[m - 1] * ro[m] * so[m];
    }

    auto ratio_table = [&](double rho, std::vector<cplx>& q, std::vector<cplx>& dq) {
      const cplx x = krho * rho;
      const auto sx = h_ratios(M, x);
      const auto h0x = hankel1_scaled(1, x);
      q.resize(M + 1);
      dq.resize(M + 1);
      q[0] = h0x[0] / h0o[0] * std::exp(I * (x - zo));
      dq[0] = -h0x[1] / h0o[0] * std::exp(I * (x - zo));
      for (int m = 1; m <= M; ++m) {
        q[m] = q[m - 1] * sx[m] / so[m];
        dq[m] = q[m] * (1.0 / sx[m] - static_cast<double>(m) / x);
      }
    };
    ratio_table(obs_.rho, t.qo, t.dqo);
    if (src_.rho == obs_.rho) {
      t.qs = t.qo;
      t.dqs = t.dqo;
    } else {
      ratio_table(src_.rho, t.qs, t.dqs);
    }
    return t;
  }

  Mat3c order_term(const Tables& t, cplx kz, cplx krho, cplx k1rho, int m) const {
    const int a = std::abs(m);
    const Harmonic hin{k_, kz, m, eps_, k1rho};
    const Harmonic hout{k_, kz, m, 1.0, krho};
    // J_{-m} = (-1)^m J_m and likewise for H: ratios are unchanged, and the
    // interior column scale is irrelevant
    const RadialFunction zin = t.zin[a];
    const RadialFunction zj{1.0, t.ljo[a]};
    const RadialFunction zh{1.0, t.lho[a]};

    Eigen::Matrix4cd A;
    A.col(0) = tangential(harmonic_field(hout, 1.0, 0.0, zh, R_));
    A.col(1) = tangential(harmonic_field(hout, 0.0, 1.0, zh, R_));
    A.col(2) = -tangential(harmonic_field(hin, 1.0, 0.0, zin, R_));
    A.col(3) = -tangential(harmonic_field(hin, 0.0, 1.0, zin, R_));
    Eigen::Matrix<cplx, 4, 2> B;
    B.col(0) = -tangential(harmonic_field(hout, 1.0, 0.0, zj, R_));
    B.col(1) = -tangential(harmonic_field(hout, 0.0, 1.0, zj, R_));
    Eigen::Vector4d sc;
    for (int i = 0; i < 4; ++i) {
      sc(i) = A.col(i).norm();
      A.col(i) /= sc(i);
    }
    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(A);
    if (!(lu.rcond() > 1e-15))
      throw std::runtime_error("reflection matrix: boundary system is numerically singular at m = " +
                               std::to_string(m) + ", k_z/k = (" + std::to_string((kz / k_).real()) + ", " +
                               std::to_string((kz / k_).imag()) + ")");
    const Eigen::Matrix<cplx, 4, 2> X = lu.solve(B);
    Eigen::Matrix2cd Rn;
    Rn.row(0) = X.row(0) / sc(0);
    Rn.row(1) = X.row(1) / sc(1);

    // incident amplitudes as linear forms on the Cartesian dipole, in units of H_m(k_rho R)
    const double md = static_cast<double>(m);
    const cplx hv = t.qs[a], hd = t.dqs[a];
    Eigen::Matrix<cplx, 2, 3> U;
    U(0, 0) = -I * kz * krho * hd / (k_ * k_);
    U(0, 1) = -kz * (md / src_.rho) * hv / (k_ * k_);
    U(0, 2) = krho * krho * hv / (k_ * k_);
    U(1, 0) = (I / k_) * (I * md / src_.rho) * hv;
    U(1, 1) = (I / k_) * krho * hd;
    U(1, 2) = 0.0;
    U = U * Csrc_;

    const RadialFunction zo{t.qo[a], t.dqo[a]};
    Eigen::Matrix<cplx, 3, 2> F;
    F.col(0) = Cobs_ * harmonic_field(hout, 1.0, 0.0, zo, obs_.rho).e;
    F.col(1) = Cobs_ * harmonic_field(hout, 0.0, 1.0, zo, obs_.rho).e;
    const cplx phase = std::exp(I * (md * (obs_.phi - src_.phi)));
    return (phase * t.P[a]) * (F * Rn * U);
  }

  bool sum_orders(cplx kz, cplx krho, cplx k1rho, int M, Packed& out) const {
    const Tables t = tables(krho, k1rho, M);
    Mat3c S = Mat3c::Zero();
    int quiet = 0;
    bool converged = false;
    for (int m = 0; m <= M; ++m) {
      Mat3c term = order_term(t, kz, krho, k1rho, m);
      if (m > 0) term += order_term(t, kz, krho, k1rho, -m);
      S += term;
      quiet = (term.cwiseAbs().maxCoeff() < 1e-6 * S.cwiseAbs().maxCoeff()) ? quiet + 1 : 0;
      if (m >= 5 && quiet >= 3) {
        converged = true;
        break;
      }
    }
    if (!converged) return false;
    const Mat3c G = (I / (8.0 * kPi)) * std::exp(I * kz * (obs_.z - src_.z)) * S;
    const Mat3c D = I * kz * G;
    out.head<9>() = Eigen::Map<const Eigen::Matrix<cplx, 9, 1>>(G.data());
    out.tail<9>() = Eigen::Map<const Eigen::Matrix<cplx, 9, 1>>(D.data());
    return true;
  }

  double R_;
  cplx eps_, k_;
  Cyl obs_, src_;
  GreenOptions opts_;
  Eigen::Matrix3d Cobs_, Csrc_;
};

GreenResult unpack(const Packed& p) {
  GreenResult g;
  g.G = Eigen::Map<const Mat3c>(p.data());
  g.dzG = Eigen::Map<const Mat3c>(p.data() + 9);
  return g;
}

double im_size(const Packed& p, double k) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s = std::max(s, std::abs(p(i).imag()));
  for (int i = 9; i < 18; ++i) s = std::max(s, std::abs(p(i).imag()) / k);
  return s;
}

double abs_size(const Packed& p, double k) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s = std::max(s, std::abs(p(i)));
  for (int i = 9; i < 18; ++i) s = std::max(s, std::abs(p(i)) / k);
  return s;
}

// Real-axis tails in doubling chunks on both sides of [-a, a].
template <class F, class Size>
Packed add_tails(F&& f, Packed total, double a, double k, const GreenOptions& opts, Size&& size) {
  for (int side : {+1, -1}) {
    double lo = a, w = a;
    for (int it = 0;; ++it) {
      if (it > 60) throw std::runtime_error("scattering Green tensor: k_z tail did not settle");
      const Interval iv = side > 0 ? Interval(lo, lo + w) : Interval(-lo - w, -lo);
      const Packed chunk = integrate_adaptive(f, iv, opts.quad).value;
      total += chunk;
      const double ref = size(total, k);
      if (size(chunk, k) <= opts.tail_tol * ref || abs_size(chunk, k) <= 1e-14 * abs_size(total, k)) break;
      lo += w;
      w *= 2.0;
    }
  }
  return total;
}

}  // namespace

Vec3c cyl_wave_function(cplx kz, int m, CylPolarization p, double omega, const Vec3& position) {
  const double k = omega / si::c;
  const Cyl c = to_cyl(position);
  if (!(c.rho > 0.0)) throw std::invalid_argument("cyl_wave_function: position on the axis");
  const cplx krho = transverse_wavenumber(k * k - kz * kz);
  const cplx x = krho * c.rho;
  auto h = hankel1_scaled(std::abs(m) + 1, x);
  auto dh = bessel_derivatives(h, x);
  auto z = signed_order(h, dh, m);
  const cplx s = std::exp(I * x);
  z.value *= s;
  z.derivative *= s;
  const Harmonic hm{k, kz, m, 1.0, krho};
  const cplx amp = krho * krho / k;
  const HarmonicField f =
      p == CylPolarization::TM ? harmonic_field(hm, amp, 0.0, z, c.rho) : harmonic_field(hm, 0.0, -I * amp, z, c.rho);
  return cylindrical_to_cartesian(f.e, c.phi) * std::exp(I * (static_cast<double>(m) * c.phi + kz * c.z));
}

Eigen::Matrix2cd reflection_matrix(const Fiber& fiber, cplx kz, int m, double omega) {
  fiber.validate();
  const double k = omega / si::c;
  const double R = fiber.radius;
  const cplx krho = transverse_wavenumber(k * k - kz * kz);
  const cplx k1rho = transverse_wavenumber(fiber.index * fiber.index * k * k - kz * kz);
  const int M = std::abs(m) + 1;
  auto jin = bessel_j_scaled(M, k1rho * R), djin = bessel_derivatives(jin, k1rho * R);
  auto jo = bessel_j_scaled(M, krho * R), djo = bessel_derivatives(jo, krho * R);
  auto ho = hankel1_scaled(M, krho * R), dho = bessel_derivatives(ho, krho * R);
  const Harmonic hin{k, kz, m, fiber.index * fiber.index, k1rho};
  const Harmonic hout{k, kz, m, 1.0, krho};
  const auto zin = signed_order(jin, djin, m), zj = signed_order(jo, djo, m), zh = signed_order(ho, dho, m);
  Eigen::Matrix4cd A;
  A.col(0) = tangential(harmonic_field(hout, 1.0, 0.0, zh, R));
  A.col(1) = tangential(harmonic_field(hout, 0.0, 1.0, zh, R));
  A.col(2) = -tangential(harmonic_field(hin, 1.0, 0.0, zin, R));
  A.col(3) = -tangential(harmonic_field(hin, 0.0, 1.0, zin, R));
  Eigen::Matrix<cplx, 4, 2> B;
  B.col(0) = -tangential(harmonic_field(hout, 1.0, 0.0, zj, R));
  B.col(1) = -tangential(harmonic_field(hout, 0.0, 1.0, zj, R));
  Eigen::Vector4d sc;
  for (int i = 0; i < 4; ++i) {
    sc(i) = A.col(i).norm();
    A.col(i) /= sc(i);
  }
  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(A);
  if (!(lu.rcond() > 1e-15)) throw std::runtime_error("reflection matrix: boundary system is numerically singular");
  const Eigen::Matrix<cplx, 4, 2> X = lu.solve(B);
  Eigen::Matrix2cd Rm;
  Rm.row(0) = X.row(0) / sc(0);
  Rm.row(1) = X.row(1) / sc(1);
  return Rm * std::exp(krho.imag() * R - I * krho * R);
}

GreenResult scattering_green(const Fiber& fiber, const Vec3& r, const Vec3& rp, double omega,
                             const GreenOptions& opts) {
  fiber.validate();
  opts.quad.validate();
  const double k = omega / si::c;
  const Kernel K(fiber, r, rp, cplx(k, 0.0), opts);
  if (fiber.index == cplx(1.0, 0.0)) return {Mat3c::Zero(), Mat3c::Zero()};  // nothing scatters
  const double n = fiber.index.real();
  const double T = (n + 0.5) * k;
  const double h = opts.contour_height * k;
  auto on_contour = [&](double t) -> Packed {
    const double a = kPi * t / T;
    const cplx kz(t, -h * std::sin(a));
    const cplx jac(1.0, -h * (kPi / T) * std::cos(a));
    return K(kz) * jac;
  };
  Packed total = integrate_breakpoints(on_contour, {-T, -n * k, -k, 0.0, k, n * k, T}, opts.quad).value;
  auto on_axis = [&](double t) -> Packed { return K(cplx(t, 0.0)); };
  total = add_tails(on_axis, total, T, k, opts, im_size);
  return unpack(total);
}

Mat3c scattering_green_tensor(const Fiber& fiber, const Vec3& r, const Vec3& rp, double omega,
                              const QuadratureSpec& quad, int m_max) {
  GreenOptions o;
  o.quad = quad;
  o.m_max = m_max;
  return scattering_green(fiber, r, rp, omega, o).G;
}

GreenResult scattering_green_imaginary(const Fiber& fiber, const Vec3& r, const Vec3& rp, double xi,
                                       const GreenOptions& opts) {
  fiber.validate();
  if (!(xi > 0.0)) throw std::invalid_argument("scattering_green_imaginary: xi must be positive");
  const double kap = xi / si::c;
  const Kernel K(fiber, r, rp, cplx(0.0, kap), opts);
  if (fiber.index == cplx(1.0, 0.0)) return {Mat3c::Zero(), Mat3c::Zero()};  // nothing scatters
  auto on_axis = [&](double t) -> Packed { return K(cplx(t, 0.0)); };
  const double gap = std::hypot(r(0), r(1)) + std::hypot(rp(0), rp(1)) - 2.0 * fiber.radius;
  const double L = kap + 1.0 / gap;
  Packed total = integrate_breakpoints(on_axis, {-L, 0.0, L}, opts.quad).value;
  total = add_tails(on_axis, total, L, L, opts, abs_size);
  return unpack(total);
}

GreenObservables green_observables(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                   const GreenOptions& opts) {
  atom.validate();
  fiber.validate();
  pos.validate(fiber);
  const Vec3 rA(pos.x, 0.0, 0.0);
  const auto g = scattering_green(fiber, rA, rA, atom.omega, opts);
  const double k = atom.k();
  const double w2 = atom.omega * atom.omega;
  const Vec3c& d10 = atom.dipole;
  const Vec3c d01 = atom.d01();
  const Eigen::Matrix3d imG = g.G.imag() + (k / (6.0 * kPi)) * Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d imD = g.dzG.imag();
  GreenObservables o;
  o.G = g.G;
  o.dzG = g.dzG;
  o.Gamma = (2.0 * si::mu0 * w2 / si::hbar) * (d10.transpose() * imG.cast<cplx>() * d01)(0, 0).real();
  // The quoted d10 is the positive-frequency amplitude of <d(t)>, i.e. <0|d|1>,
  // so it takes the place of d01 in the force contraction (same choice as the
  // mode couplings d10 . e*). Gamma is insensitive to the swap.
  o.Fz = (2.0 * I * si::mu0 * w2 * (d01.transpose() * imD.cast<cplx>() * d10)(0, 0)).real();
  o.alpha = -o.Fz / (si::hbar * k * o.Gamma);
  return o;
}

double nonresonant_lateral_check(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                 const std::vector<double>& xi_grid, const GreenOptions& opts) {
  atom.validate();
  pos.validate(fiber);
  if (xi_grid.size() < 2) throw std::invalid_argument("nonresonant_lateral_check: need at least two xi points");
  for (size_t i = 0; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > 0.0)) throw std::invalid_argument("nonresonant_lateral_check: xi must be positive");
    if (i > 0 && !(xi_grid[i] > xi_grid[i - 1]))
      throw std::invalid_argument("nonresonant_lateral_check: xi grid must increase");
  }
  const Vec3 rA(pos.x, 0.0, 0.0);
  const double wkn = -atom.omega;  // excited state: the only transition goes down
  std::vector<double> vals;
  for (double xi : xi_grid) {
    const auto g = scattering_green_imaginary(fiber, rA, rA, xi, opts);
    const Mat3c S = 0.5 * (g.dzG + g.dzG.transpose());
    const cplx c = (atom.dipole.transpose() * S * atom.d01())(0, 0);
    vals.push_back(xi * xi * wkn / (wkn * wkn + xi * xi) * c.real());
  }
  double integral = 0.0;
  for (size_t i = 1; i < xi_grid.size(); ++i) integral += 0.5 * (vals[i] + vals[i - 1]) * (xi_grid[i] - xi_grid[i - 1]);
  return -(2.0 * si::mu0 / kPi) * integral;
}

}  // namespace latcp
