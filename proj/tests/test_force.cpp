#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latcp/force.hpp"

using namespace latcp;

namespace {
Fiber fiber() { return silica_nanofiber(); }
AtomPosition at(double d) { return AtomPosition::from_surface_distance(fiber(), d); }
}  // namespace

TEST_CASE("lateral force: polarization symmetry") {
  const auto pos = at(30e-9);
  const double fp = lateral_force_modes(cesium_d2(Polarization::SigmaPlus), pos, fiber());
  CHECK(fp < 0.0);
  CHECK(lateral_force_modes(cesium_d2(Polarization::SigmaMinus), pos, fiber()) == doctest::Approx(-fp).epsilon(1e-10));
  CHECK(std::abs(lateral_force_modes(cesium_d2(Polarization::Pi), pos, fiber())) <= 1e-10 * std::abs(fp));
}

TEST_CASE("recoil observables are consistent") {
  const auto atom = cesium_d2();
  const auto r = recoil_observables(atom, at(10e-9), fiber());
  CHECK(r.momentum_kick == doctest::Approx(r.F_z0 / r.Gamma).epsilon(1e-15));
  CHECK(r.velocity_gain == doctest::Approx(r.momentum_kick / atom.mass).epsilon(1e-15));
  // F / Gamma = -hbar k alpha
  CHECK(r.momentum_kick == doctest::Approx(-si::hbar * atom.k() * r.alpha).epsilon(1e-10));
  CHECK(si::hbar * atom.k() / atom.mass == doctest::Approx(3.524e-3).epsilon(1e-3));
  CHECK(std::abs(r.velocity_gain) < si::hbar * atom.k() / atom.mass);
  CHECK(std::abs(r.velocity_gain) > 1e-4);
}

TEST_CASE("decomposition overload matches the direct call") {
  const auto atom = cesium_d2();
  const auto e = decompose_emission(atom, at(80e-9), fiber());
  CHECK(lateral_force_modes(e) == doctest::Approx(lateral_force_modes(atom, at(80e-9), fiber())).epsilon(1e-12));
  const auto r = recoil_observables(atom, e);
  CHECK(r.Gamma == e.rates.Gamma);
  CHECK(r.alpha == e.alpha);
}

TEST_CASE("force scales with |d0|^2, momentum kick does not") {
  auto a = cesium_d2();
  auto b = a;
  b.dipole *= 2.0;
  const auto ra = recoil_observables(a, at(40e-9), fiber());
  const auto rb = recoil_observables(b, at(40e-9), fiber());
  CHECK(rb.F_z0 == doctest::Approx(4.0 * ra.F_z0).epsilon(1e-12));
  CHECK(rb.momentum_kick == doctest::Approx(ra.momentum_kick).epsilon(1e-12));
}

TEST_CASE("exponential time profile") {
  const auto r = recoil_observables(cesium_d2(), at(50e-9), fiber());
  CHECK(force_time_profile(r, 0.0) == r.F_z0);
  CHECK(force_time_profile(r, 1.0 / r.Gamma) == doctest::Approx(r.F_z0 / std::exp(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(force_time_profile(r, -1e-9), std::invalid_argument);
}
