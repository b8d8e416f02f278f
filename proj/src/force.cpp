#include "latcp/force.hpp"

#include <cmath>

namespace latcp {

double lateral_force_modes(const EmissionDecomposition& e) {
  const double guided = e.mode.beta * (e.rates.gamma_g_plus - e.rates.gamma_g_minus);
  return -si::hbar * (guided + e.radiation.kz_moment);
}

double lateral_force_modes(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  return lateral_force_modes(decompose_emission(atom, pos, fiber));
}

LateralForceResult recoil_observables(const AtomTransition& atom, const EmissionDecomposition& e) {
  LateralForceResult r;
  r.Gamma = e.rates.Gamma;
  if (!(r.Gamma > 0.0)) throw std::invalid_argument("recoil_observables: Gamma must be positive");
  r.F_z0 = lateral_force_modes(e);
  r.alpha = e.alpha;
  r.momentum_kick = r.F_z0 / r.Gamma;
  r.velocity_gain = r.momentum_kick / atom.mass;
  return r;
}

LateralForceResult recoil_observables(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  return recoil_observables(atom, decompose_emission(atom, pos, fiber));
}

double force_time_profile(const LateralForceResult& result, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("force_time_profile: t must be non-negative");
  return result.F_z0 * std::exp(-result.Gamma * t);
}

}  // namespace latcp
