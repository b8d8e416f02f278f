#pragma once
// Fundamental (HE11) guided mode and radiation modes of a step-index fiber.
//
// Guided profiles are normalized so that 2 pi Int n^2 |e|^2 rho d rho = 1.
// Radiation profiles are delta-normalized in omega and k_z; for them the
// cross-section integral reduces to the far-field flux, which gives the
// metric N = (2 pi omega / q^2) T^H T on the interior amplitudes (A, B), T
// being the map to the exterior J/Y amplitudes.

#include <string>

#include "latcp/cylinder_fields.hpp"

namespace latcp {

struct GuidedMode {
  double omega;
  double beta;
  double beta_prime;  // d beta / d omega
  int f = +1;         // propagation direction
  int p = +1;         // handedness, azimuthal order m = p
  double v_number = 0.0;
  bool single_mode = true;
  std::string warning;
  // (E_z, Z0 H_z) amplitudes inside (on J_m) and outside (on H1_m), normalized.
  Eigen::Vector4cd coeffs = Eigen::Vector4cd::Zero();
};

struct RadiationModeIndex {
  double omega;
  double kz;
  int m;
  int p;  // +1 or -1; see radiation_profile
};

/// Cylindrical components (e_rho, e_phi, e_z) at radius r, phi = 0, z = 0.
struct ModeProfile {
  Vec3c e;
};

/// Throws GeometryError when no HE11 root exists in (k, Re(n) k).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pole-free HE11 characteristic function at beta (Re(n) is used).
double he11_characteristic(const Fiber& fiber, double omega, double beta);

/// Largest-beta root of the HE11 equation. No derivative, no profile.
double solve_beta(const Fiber& fiber, double omega);

GuidedMode solve_guided_mode(const Fiber& fiber, double omega);

/// Same omega and beta, other direction / handedness.
GuidedMode guided_mode_variant(const Fiber& fiber, const GuidedMode& mode, int f, int p);

ModeProfile guided_profile(const Fiber& fiber, const GuidedMode& mode, double r);

/// Basis choice: p = +1 is the normalized solution with no interior H_z
/// (A = 1, B = 0), p = -1 the metric-orthogonal complement.
ModeProfile radiation_profile(const Fiber& fiber, const RadiationModeIndex& index, double r);

/// All orders |m| <= mmax of the radiation family at one (omega, k_z),
/// evaluated at a single radius. Bessel tables are shared across orders.
class RadiationSlice {
 public:
  RadiationSlice(const Fiber& fiber, double omega, double kz, double r, int mmax);

  struct Order {
    Eigen::Matrix<cplx, 3, 2> fields;  // columns: interior amplitude A = 1, B = 1
    Eigen::Matrix2cd metric;
  };
  Order order(int m) const;

  /// Sum over both polarizations of |d . e_p|^2 at order m (Cartesian d at phi = 0).
  double coupling(int m, const Vec3c& d_cart) const;

  double q() const { return q_; }
  int mmax() const { return mmax_; }

 private:
  RadialFunction pick(const std::vector<cplx>& v, const std::vector<cplx>& d, int m) const;

  double omega_, k_, kz_, r_, R_, h_, q_;
  cplx eps_;
  int mmax_;
  std::vector<cplx> jh_, djh_;            // J_m(h R)
  std::vector<cplx> jq_, djq_, yq_, dyq_;  // at q R
  std::vector<cplx> jr_, djr_, yr_, dyr_;  // at q r (or h r inside)
};

}  // namespace latcp
