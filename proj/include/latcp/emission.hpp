#pragma once
// Spontaneous emission into guided and radiation modes (mode-sum method).

#include <array>

#include "latcp/fiber_modes.hpp"

namespace latcp {

struct GuidedRates {
  std::array<std::array<double, 2>, 2> rate{};  // [f][p], index 0 <-> +1
  double operator()(int f, int p) const { return rate[f > 0 ? 0 : 1][p > 0 ? 0 : 1]; }
  double forward() const { return (*this)(+1, +1) + (*this)(+1, -1); }
  double backward() const { return (*this)(-1, +1) + (*this)(-1, -1); }
};

struct RadiationRates {
  double plus = 0.0;
  double minus = 0.0;
  double kz_moment = 0.0;  // Int k_z gamma dk_z summed over m, p  [rad/s / m]
  int m_max = 0;           // highest order kept
};

struct RateBreakdown {
  double gamma_g_plus = 0.0;
  double gamma_g_minus = 0.0;
  double gamma_r_plus = 0.0;
  double gamma_r_minus = 0.0;
  double Gamma = 0.0;
};

/// Everything the mode method needs at one atom position, computed once.
struct EmissionDecomposition {
  GuidedMode mode;
  GuidedRates guided;
  RadiationRates radiation;
  RateBreakdown rates;
  double alpha = 0.0;
};

struct ModeSumOptions {
  int m_max = 400;  // cap on the adaptive order search
  QuadratureSpec quad{1e-9, 0.0, 4000};
};

GuidedRates guided_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber);
GuidedRates guided_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                 const GuidedMode& mode);

/// Per-(k_z, m) radiation rate density summed over p  [rad/s per 1/m].
double radiation_rate_density(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                              double kz, int m);

/// Orders |m| = 0..M until three consecutive orders each add < 1e-6 of the
/// running total (M >= 5). Throws std::runtime_error if m_max is reached first.
RadiationRates radiation_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                       int m_max, const QuadratureSpec& quad);

RateBreakdown total_rate_and_split(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber);

double directionality(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber);

/// The lossless part of `fiber` is used throughout.
EmissionDecomposition decompose_emission(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                         const ModeSumOptions& opts = {});
EmissionDecomposition decompose_emission(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                         const GuidedMode& mode, const ModeSumOptions& opts = {});

}  // namespace latcp
