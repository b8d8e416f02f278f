#include "latcp/emission.hpp"

#include <cmath>

namespace latcp {

namespace {

void check_inputs(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  fiber.validate();
  atom.validate();
  pos.validate(fiber);
}

// Rows 0..M: rate from |m| = j (both signs); rows M+1..2M+1: same times k_z / k.
Eigen::VectorXd order_table(const AtomTransition& atom, double x, const Fiber& fiber, double kz, int M) {
  const double k = atom.k();
  const double pre = atom.omega / (2.0 * si::epsilon0 * si::hbar);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * (M + 1));
  RadiationSlice s(fiber, atom.omega, kz, x, M);
  // d10 is the positive-frequency amplitude: the coupling is d10 . e*
  const Vec3c dc = atom.dipole.conjugate();
  const double qx = s.q() * x;
  const auto jr = bessel_j_orders(M, qx);
  for (int m = 0; m <= M; ++m) {
    // past the turning point the whole order family is below double precision
    if (m > qx + 5.0 && std::abs(jr[m]) < 1e-17) break;
    double g = s.coupling(m, dc);
    if (m > 0) g += s.coupling(-m, dc);
    out(m) = pre * g;
    out(M + 1 + m) = pre * g * kz / k;
  }
  return out;
}

struct HalfIntegrals {
  Eigen::VectorXd fwd, bwd;
};

// k_z = k cos(theta), d k_z = k sin(theta) d theta
HalfIntegrals integrate_orders(const AtomTransition& atom, double x, const Fiber& fiber, int M,
                               const QuadratureSpec& quad) {
  const double k = atom.k();
  auto f = [&](double th) -> Eigen::VectorXd {
    return order_table(atom, x, fiber, k * std::cos(th), M) * (k * std::sin(th));
  };
  HalfIntegrals h;
  h.fwd = integrate_adaptive(f, Interval(0.0, kPi / 2), quad).value;
  h.bwd = integrate_adaptive(f, Interval(kPi / 2, kPi), quad).value;
  return h;
}

}  // namespace

GuidedRates guided_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                 const GuidedMode& mode) {
  check_inputs(atom, pos, fiber);
  const Fiber lossless = fiber.lossless();
  GuidedRates out;
  const double pre = atom.omega * mode.beta_prime / (2.0 * si::epsilon0 * si::hbar);
  for (int f : {+1, -1}) {
    for (int p : {+1, -1}) {
      const auto m = guided_mode_variant(lossless, mode, f, p);
      // phi = 0: cylindrical components coincide with Cartesian ones
      const Vec3c e = guided_profile(lossless, m, pos.x).e;
      out.rate[f > 0 ? 0 : 1][p > 0 ? 0 : 1] = pre * std::norm(atom.dipole.dot(e));  // |d10 . e*|^2
    }
  }
  return out;
}

GuidedRates guided_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  return guided_partial_rates(atom, pos, fiber, solve_guided_mode(fiber.lossless(), atom.omega));
}

double radiation_rate_density(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber, double kz,
                              int m) {
  check_inputs(atom, pos, fiber);
  RadiationSlice s(fiber.lossless(), atom.omega, kz, pos.x, std::abs(m));
  return atom.omega / (2.0 * si::epsilon0 * si::hbar) * s.coupling(m, atom.dipole.conjugate());
}

RadiationRates radiation_partial_rates(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                       int m_max, const QuadratureSpec& quad) {
  check_inputs(atom, pos, fiber);
  quad.validate();
  if (m_max < 5) throw std::invalid_argument("radiation_partial_rates: m_max below the floor of 5");
  const Fiber lossless = fiber.lossless();
  int M = std::min(m_max, std::max(8, static_cast<int>(std::ceil(atom.k() * pos.x)) + 12));
  for (;;) {
    const auto h = integrate_orders(atom, pos.x, lossless, M, quad);
    const Eigen::VectorXd rate = h.fwd.head(M + 1) + h.bwd.head(M + 1);
    const double total = rate.sum();
    bool ok = true;
    for (int j = M - 2; j <= M; ++j) ok = ok && rate(j) < 1e-6 * total;
    if (ok) {
      RadiationRates r;
      r.plus = h.fwd.head(M + 1).sum();
      r.minus = h.bwd.head(M + 1).sum();
      r.kz_moment = atom.k() * (h.fwd.tail(M + 1).sum() + h.bwd.tail(M + 1).sum());
      r.m_max = M;
      return r;
    }
    if (M >= m_max)
      throw std::runtime_error("radiation m-sum not converged at m_max = " + std::to_string(M) +
                               ": last increment contributed " + std::to_string(rate(M) / total) +
                               " of the total");
    M = std::min(m_max, M + M / 2);
  }
}

EmissionDecomposition decompose_emission(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                         const GuidedMode& mode, const ModeSumOptions& opts) {
  EmissionDecomposition d;
  d.mode = mode;
  d.guided = guided_partial_rates(atom, pos, fiber, mode);
  d.radiation = radiation_partial_rates(atom, pos, fiber, opts.m_max, opts.quad);
  auto& r = d.rates;
  r.gamma_g_plus = d.guided.forward();
  r.gamma_g_minus = d.guided.backward();
  r.gamma_r_plus = d.radiation.plus;
  r.gamma_r_minus = d.radiation.minus;
  r.Gamma = r.gamma_g_plus + r.gamma_g_minus + r.gamma_r_plus + r.gamma_r_minus;
  if (!(r.Gamma > 0.0)) throw std::runtime_error("decompose_emission: total rate is not positive");
  const double k = atom.k();
  const double guided_kick = mode.beta / k * (r.gamma_g_plus - r.gamma_g_minus);
  d.alpha = (guided_kick + d.radiation.kz_moment / k) / r.Gamma;
  return d;
}

EmissionDecomposition decompose_emission(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber,
                                         const ModeSumOptions& opts) {
  return decompose_emission(atom, pos, fiber, solve_guided_mode(fiber.lossless(), atom.omega), opts);
}

RateBreakdown total_rate_and_split(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  return decompose_emission(atom, pos, fiber).rates;
}

double directionality(const AtomTransition& atom, const AtomPosition& pos, const Fiber& fiber) {
  return decompose_emission(atom, pos, fiber).alpha;
}

}  // namespace latcp
