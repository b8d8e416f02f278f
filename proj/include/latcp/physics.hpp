#pragma once
// SI constants and the domain types shared by every physics module.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "latcp/numerics.hpp"

namespace latcp {

using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;

namespace si {
inline constexpr double c = 299792458.0;
inline constexpr double epsilon0 = 8.8541878128e-12;
inline constexpr double mu0 = 1.0 / (epsilon0 * c * c);
inline constexpr double hbar = 1.054571817e-34;
}  // namespace si

/// Dielectric cylinder in vacuum.
struct Fiber {
  double radius;  // [m]
  cplx index;     // refractive index at the transition frequency

  void validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("Fiber: radius must be positive");
    if (!(index.real() >= 1.0)) throw std::invalid_argument("Fiber: Re(n) must be at least 1");
    if (index.imag() < 0.0) throw std::invalid_argument("Fiber: Im(n) must be non-negative");
  }
  /// Same cylinder with the absorption dropped (mode decomposition).
  Fiber lossless() const { return {radius, cplx(index.real(), 0.0)}; }
};

enum class Polarization { SigmaPlus, SigmaMinus, Pi };

Polarization parse_polarization(const std::string& s);
std::string to_string(Polarization p);

/// Two-level transition |1> -> |0>. `dipole` is d10; d01 is its conjugate.
struct AtomTransition {
  double omega;   // [rad/s]
  Vec3c dipole;   // d10 [C m], Cartesian
  double mass;    // [kg]
  Polarization label;

  double k() const { return omega / si::c; }
  double wavelength() const { return 2.0 * kPi * si::c / omega; }
  Vec3c d01() const { return dipole.conjugate(); }

  void validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("AtomTransition: omega must be positive");
    if (!(dipole.norm() > 0.0)) throw std::invalid_argument("AtomTransition: dipole must be non-zero");
    if (!(mass > 0.0)) throw std::invalid_argument("AtomTransition: mass must be positive");
  }
};

/// Atom on the positive x axis at r_A = x_A x.
struct AtomPosition {
  double x;  // [m]

  static AtomPosition from_surface_distance(const Fiber& f, double d) { return {f.radius + d}; }
  double surface_distance(const Fiber& f) const { return x - f.radius; }
  void validate(const Fiber& f) const {
    if (!(x > f.radius)) throw std::invalid_argument("AtomPosition: atom must sit outside the fiber");
  }
};

/// sigma+ : d0 (i, 0, 1); sigma- : d0 (-i, 0, 1); pi : d0 sqrt(2) y.
/// All three carry the same |d10|.
Vec3c dipole_vector(Polarization p, double d0);

/// Cesium D2 line at 852 nm with |d10| = sqrt(2) x 1.9e-29 C m.
AtomTransition cesium_d2(Polarization p = Polarization::SigmaPlus);

/// Silica nanofiber, R = 250 nm, n = 1.45 + 2.05e-7 i.
Fiber silica_nanofiber();

/// Free-space decay rate k^3 |d|^2 / (3 pi eps0 hbar).
double free_space_rate(const AtomTransition& atom);

}  // namespace latcp
