#pragma once
// Scattering Green tensor G1 of a dielectric cylinder and the observables
// built from it. G1 is defined through E_scat(r) = omega^2 mu0 G1(r, r') p
// for a point dipole p at r'.
//
// Each (k_z, m) harmonic is handled in the (E_z, Z0 H_z) amplitude basis:
// index 0 is TM (E_z), index 1 is TE (Z0 H_z). The k_z integral runs along a
// contour pushed below the real axis for k_z > 0 and above it for k_z < 0,
// clear of the guided-mode poles, and returns to the real axis past
// (Re n + 1/2) k for the evanescent tails.

#include "latcp/physics.hpp"

namespace latcp {

using Vec3 = Eigen::Vector3d;

enum class CylPolarization { TM, TE };

/// Outgoing vector wave function at a Cartesian position: TM is the N-type
/// function (E_z = k_rho^2 / k H_m), TE the M-type one (Z0 H_z = -i k_rho^2 / k H_m),
/// both carrying exp(i(m phi + k_z z)). Cartesian components.
Vec3c cyl_wave_function(cplx kz, int m, CylPolarization p, double omega, const Vec3& position);

/// Maps incident regular amplitudes (on J_m) to scattered outgoing amplitudes
/// (on H1_m). Throws std::runtime_error when the boundary system is degenerate.
Eigen::Matrix2cd reflection_matrix(const Fiber& fiber, cplx kz, int m, double omega);

struct GreenOptions {
  QuadratureSpec quad{1e-8, 0.0, 4000};
  int m_max = 600;
  double contour_height = 0.2;  // in units of k
  double tail_tol = 1e-6;       // stop the real-axis tail when Im parts change less than this
};

struct GreenResult {
  Mat3c G;     // G1(r, r')
  Mat3c dzG;   // d/dz of G1(r, r') at the observation point
};

/// Both points outside the cylinder. Note: Re G1 is only as converged as the
/// Im-part-driven tail truncation allows.
GreenResult scattering_green(const Fiber& fiber, const Vec3& r, const Vec3& r_prime, double omega,
                             const GreenOptions& opts = {});

Mat3c scattering_green_tensor(const Fiber& fiber, const Vec3& r, const Vec3& r_prime, double omega,
                              const QuadratureSpec& quad, int m_max);

/// Same at imaginary frequency omega = i xi, with a frequency-independent index.
GreenResult scattering_green_imaginary(const Fiber& fiber, const Vec3& r, const Vec3& r_prime, double xi,
                                       const GreenOptions& opts = {});

struct GreenObservables {
  double Gamma;  // [rad/s]
  double Fz;     // [N]
  double alpha;
  Mat3c G;       // G1(r_A, r_A)
  Mat3c dzG;
};

GreenObservables green_observables(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                   const GreenOptions& opts = {});

/// Lateral part of the non-resonant force, trapezoid rule on the given xi grid
/// (strictly increasing, positive). Vanishes up to rounding.
double nonresonant_lateral_check(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                 const std::vector<double>& xi_grid, const GreenOptions& opts = {});

}  // namespace latcp
