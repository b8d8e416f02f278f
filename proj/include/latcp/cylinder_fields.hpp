#pragma once
// Field algebra for a single cylindrical harmonic exp(i(m phi + k_z z)) in a
// homogeneous region. Every field is generated from its longitudinal parts
// E_z = a Z_m(k_t rho) and Z0 H_z = b Z_m(k_t rho); magnetic fields carry the
// vacuum impedance Z0 so both sets share units.

#include <Eigen/Dense>

#include "latcp/physics.hpp"

namespace latcp {

/// Z_m(x) and dZ_m/dx at x = k_t rho.
struct RadialFunction {
  cplx value;
  cplx derivative;
};

/// Cylindrical components (rho, phi, z) of E and Z0 H.
struct HarmonicField {
  Vec3c e;
  Vec3c h;
};

struct Harmonic {
  cplx k;    // vacuum wavenumber omega / c (complex for imaginary frequencies)
  cplx kz;   // axial wavenumber
  int m;     // azimuthal order
  cplx eps;  // relative permittivity of the region
  cplx kt;   // transverse wavenumber, kt^2 = eps k^2 - kz^2
};

inline HarmonicField harmonic_field(const Harmonic& hm, cplx a, cplx b, RadialFunction z, double rho) {
  const cplx i(0.0, 1.0);
  const cplx pre = i / (hm.kt * hm.kt);
  const cplx im_rho = i * static_cast<double>(hm.m) / rho;
  const cplx zp = hm.kt * z.derivative;  // d/d rho
  HarmonicField f;
  f.e(0) = pre * (hm.kz * a * zp + hm.k * im_rho * b * z.value);
  f.e(1) = pre * (hm.kz * im_rho * a * z.value - hm.k * b * zp);
  f.e(2) = a * z.value;
  f.h(0) = pre * (hm.kz * b * zp - hm.k * hm.eps * im_rho * a * z.value);
  f.h(1) = pre * (hm.kz * im_rho * b * z.value + hm.k * hm.eps * a * zp);
  f.h(2) = b * z.value;
  return f;
}

/// The four tangential components (E_z, E_phi, Z0 H_z, Z0 H_phi) that must be
/// continuous across a cylindrical interface.
inline Eigen::Vector4cd tangential(const HarmonicField& f) {
  return Eigen::Vector4cd(f.e(2), f.e(1), f.h(2), f.h(1));
}

/// Rotates cylindrical components at azimuth phi into Cartesian ones.
inline Vec3c cylindrical_to_cartesian(const Vec3c& v, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return Vec3c(c * v(0) - s * v(1), s * v(0) + c * v(1), v(2));
}

inline Vec3c cartesian_to_cylindrical(const Vec3c& v, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return Vec3c(c * v(0) + s * v(1), -s * v(0) + c * v(1), v(2));
}

/// Transverse wavenumber on the branch with Im >= 0 (outgoing / decaying).
inline cplx transverse_wavenumber(cplx kt2) {
  cplx kt = std::sqrt(kt2);
  if (kt.imag() < 0.0 || (kt.imag() == 0.0 && kt.real() < 0.0)) kt = -kt;
  return kt;
}

/// Unscaled J_0..J_nmax and H1_0..H1_nmax for moderate arguments.
std::vector<cplx> bessel_j_orders(int nmax, cplx z);
std::vector<cplx> hankel1_orders(int nmax, cplx z);

}  // namespace latcp
