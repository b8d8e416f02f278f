#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latcp/emission.hpp"
#include "latcp/force.hpp"
#include "latcp/greens_cylinder.hpp"
#include "latcp/greens_halfspace.hpp"

using namespace latcp;

namespace {

const AtomTransition kAtom = cesium_d2();
const double kW = kAtom.omega;
const double kK = kAtom.k();

Vec3 atom_point(const Fiber& f, double d) { return Vec3(f.radius + d, 0.0, 0.0); }

}  // namespace

TEST_CASE("reflection matrix vanishes without index contrast") {
  const Fiber vac{250e-9, cplx(1.0, 0.0)};
  for (double kz : {-0.7, 0.0, 0.4, 1.3})
    for (int m : {-2, 0, 1, 5}) CHECK(reflection_matrix(vac, kz * kK, m, kW).norm() <= 1e-13);
}

TEST_CASE("m = 0 decouples TM and TE; kz = 0 does too") {
  const Fiber f = silica_nanofiber();
  const auto R0 = reflection_matrix(f, 0.6 * kK, 0, kW);
  CHECK(std::abs(R0(0, 1)) <= 1e-14 * R0.norm());
  CHECK(std::abs(R0(1, 0)) <= 1e-14 * R0.norm());
  const auto R1 = reflection_matrix(f, 0.0, 3, kW);
  CHECK(std::abs(R1(0, 1)) <= 1e-14 * R1.norm());
  const auto R2 = reflection_matrix(f, 0.6 * kK, 2, kW);
  CHECK(std::abs(R2(0, 1)) > 1e-6 * R2.norm());
}

TEST_CASE("large absorbing cylinder reflects like a plane at normal incidence") {
  const cplx n(1.45, 0.05);
  const auto fr = fresnel(n, 0.0, kW);
  for (auto [scale, tol] : {std::pair{20.0, 2e-3}, std::pair{80.0, 5e-4}}) {
    const Fiber f{scale * kAtom.wavelength(), n};
    const auto R = reflection_matrix(f, 0.0, 0, kW);
    // outgoing over incoming Hankel content, referred to the surface
    const cplx ph = std::exp(cplx(0.0, 2.0 * (kK * f.radius - kPi / 4)));
    CHECK(std::abs((1.0 + 2.0 * R(0, 0)) * ph - fr.r_te) < tol);
    CHECK(std::abs((1.0 + 2.0 * R(1, 1)) * ph - fr.r_tm) < tol);
  }
}

TEST_CASE("vector wave functions: polarization content and divergence") {
  const Vec3 r(420e-9, -130e-9, 60e-9);
  for (double kz : {-0.5, 0.0, 0.8, 1.6}) {
    for (int m : {-2, 0, 3}) {
      const Vec3c te = cyl_wave_function(kz * kK, m, CylPolarization::TE, kW, r);
      const Vec3c tm = cyl_wave_function(kz * kK, m, CylPolarization::TM, kW, r);
      CHECK(std::abs(te(2)) <= 1e-14 * te.norm());
      CHECK(std::abs(tm(2)) > 1e-3 * tm.norm());
      for (auto p : {CylPolarization::TE, CylPolarization::TM}) {
        const double h = 1e-5 / kK;
        cplx div = 0.0;
        for (int a = 0; a < 3; ++a) {
          Vec3 dp = r, dm = r;
          dp(a) += h;
          dm(a) -= h;
          div += (cyl_wave_function(kz * kK, m, p, kW, dp)(a) - cyl_wave_function(kz * kK, m, p, kW, dm)(a)) / (2 * h);
        }
        CHECK(std::abs(div) <= 1e-7 * kK * cyl_wave_function(kz * kK, m, p, kW, r).norm());
      }
    }
  }
}

TEST_CASE("vector wave function far-field envelope") {
  // |H_m(x)| -> sqrt(2 / (pi x)) for large x
  const double kz = 0.3 * kK;
  const double krho = std::sqrt(kK * kK - kz * kz);
  const Vec3 r(50.0 / krho, 0.0, 0.0);
  const Vec3c tm = cyl_wave_function(kz, 1, CylPolarization::TM, kW, r);
  CHECK(std::abs(tm(2)) == doctest::Approx(krho * krho / kK * std::sqrt(2.0 / (kPi * 50.0))).epsilon(0.02));
}

TEST_CASE("G1 vanishes without index contrast; vacuum rate recovered") {
  const Fiber vac{250e-9, cplx(1.0, 0.0)};
  const auto g = scattering_green(vac, atom_point(vac, 100e-9), atom_point(vac, 100e-9), kW);
  CHECK(g.G.norm() == 0.0);
  CHECK(g.dzG.norm() == 0.0);
  const auto obs = green_observables(kAtom, AtomPosition::from_surface_distance(vac, 100e-9), vac);
  CHECK(obs.Gamma == doctest::Approx(free_space_rate(kAtom)).epsilon(1e-12));
  CHECK(obs.Fz == 0.0);
}

TEST_CASE("reciprocity and axial antisymmetry") {
  const Fiber f = silica_nanofiber();
  const Vec3 a = atom_point(f, 100e-9);
  const Vec3 b(f.radius + 150e-9, 30e-9, 80e-9);
  const auto ab = scattering_green(f, a, b, kW);
  const auto ba = scattering_green(f, b, a, kW);
  CHECK((ab.G - ba.G.transpose()).norm() <= 1e-8 * ab.G.norm());
  const auto aa = scattering_green(f, a, a, kW);
  CHECK((aa.G - aa.G.transpose()).norm() <= 1e-8 * aa.G.norm());
  CHECK((aa.dzG + aa.dzG.transpose()).norm() <= 1e-8 * aa.dzG.norm());
}

TEST_CASE("passivity: total Im G is positive semidefinite") {
  const Fiber lossy{250e-9, cplx(1.45, 2e-2)};
  const auto g = scattering_green(lossy, atom_point(lossy, 50e-9), atom_point(lossy, 50e-9), kW);
  const Mat3c total = g.G + Mat3c::Identity() * cplx(0.0, kK / (6.0 * kPi));
  const Mat3c im = (total - total.adjoint()) / cplx(0.0, 2.0);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    Vec3c d;
    for (int j = 0; j < 3; ++j) d(j) = cplx(nd(rng), nd(rng));
    CHECK((d.adjoint() * im * d).value().real() >= 0.0);
  }
}

TEST_CASE("imaginary frequency G1 is real for a real index") {
  const Fiber f{250e-9, cplx(1.45, 0.0)};
  const auto g = scattering_green_imaginary(f, atom_point(f, 100e-9), atom_point(f, 100e-9), kW);
  CHECK(g.G.imag().norm() <= 1e-8 * g.G.real().norm());
  CHECK(g.G.real().norm() > 0.0);
}

TEST_CASE("Green tensor agrees with the mode sum") {
  const Fiber f = silica_nanofiber();
  const auto pos = AtomPosition::from_surface_distance(f, 100e-9);
  const auto obs = green_observables(kAtom, pos, f);
  const auto modes = recoil_observables(kAtom, pos, f);
  CHECK(obs.Gamma == doctest::Approx(modes.Gamma).epsilon(1e-4));
  CHECK(obs.Fz == doctest::Approx(modes.F_z0).epsilon(1e-4));
  CHECK(obs.alpha == doctest::Approx(modes.alpha).epsilon(1e-3));
  const auto pi_obs = green_observables(cesium_d2(Polarization::Pi), pos, f);
  CHECK(std::abs(pi_obs.Fz) <= 1e-8 * std::abs(obs.Fz));
}

TEST_CASE("non-resonant lateral force vanishes") {
  const Fiber f = silica_nanofiber();
  const auto pos = AtomPosition::from_surface_distance(f, 100e-9);
  std::vector<double> xi;
  for (int i = 1; i <= 20; ++i) xi.push_back(0.5 * i * kW);
  const double nr = nonresonant_lateral_check(kAtom, pos, f, xi);
  const double scale = std::abs(green_observables(kAtom, pos, f).Fz);
  CHECK(std::abs(nr) <= 1e-10 * scale);
  CHECK_THROWS_AS(nonresonant_lateral_check(kAtom, pos, f, {2.0, 1.0}), std::invalid_argument);
}
