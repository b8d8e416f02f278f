#pragma once
// Planar half-space: vacuum for x > 0, homogeneous medium for x < 0.

#include "latcp/greens_cylinder.hpp"

namespace latcp {

struct HalfSpace {
  cplx index;

  void validate() const {
    if (index.real() < 1.0) throw std::invalid_argument("HalfSpace: Re(n) must be at least 1");
    if (index.imag() < 0.0) throw std::invalid_argument("HalfSpace: Im(n) must be non-negative");
  }
};

struct FresnelCoefficients {
  cplx r_te;
  cplx r_tm;
};

/// k_parallel may exceed omega/c (evanescent incidence).
FresnelCoefficients fresnel(cplx n, double k_parallel, double omega);

struct PlanarOptions {
  QuadratureSpec quad{1e-10, 0.0, 4000};
  double tail_tol = 1e-10;
};

/// G1 and its z-derivative at the observation point. Both points need x > 0.
GreenResult planar_scattering_green(const HalfSpace& hs, const Vec3& r, const Vec3& r_prime, double omega,
                                    const PlanarOptions& opts = {});

/// Resonant lateral force on an excited atom at distance d from the surface,
/// evaluated numerically from G1.
double planar_lateral_force(const AtomTransition& atom, double d, const HalfSpace& hs,
                            const PlanarOptions& opts = {});

struct RetardedForce {
  double force;    // [N]
  bool in_regime;  // d >= 2 lambda, where the far-field form is trustworthy
};

/// Far-field closed form: Im(d01_z d10_x) w^2 / (8 eps0 c^2 d^2) sin(2 k d) (n-1)/(n+1).
RetardedForce retarded_lateral_force(const AtomTransition& atom, double d, const HalfSpace& hs);

/// Lateral non-resonant force from the symmetric part of dG1/dz on an xi grid.
double planar_nonresonant_lateral(const AtomTransition& atom, double d, const HalfSpace& hs,
                                  const std::vector<double>& xi_grid, const PlanarOptions& opts = {});

}  // namespace latcp
