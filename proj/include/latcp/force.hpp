#pragma once
// Lateral force from the mode decomposition and the recoil it imparts.

#include "latcp/emission.hpp"

namespace latcp {

struct LateralForceResult {
  double F_z0 = 0.0;           // [N] at t = 0
  double Gamma = 0.0;          // [rad/s]
  double momentum_kick = 0.0;  // F_z0 / Gamma [kg m/s]
  double velocity_gain = 0.0;  // momentum_kick / mass [m/s]
  double alpha = 0.0;
};

/// F = -hbar [sum f beta gamma_fp + sum Int k_z gamma dk_z]
double lateral_force_modes(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber);
double lateral_force_modes(const EmissionDecomposition& e);

LateralForceResult recoil_observables(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber);
LateralForceResult recoil_observables(const AtomTransition& atom, const EmissionDecomposition& e);

/// F_z0 exp(-Gamma t), t >= 0.
double force_time_profile(const LateralForceResult& result, double t);

}  // namespace latcp
