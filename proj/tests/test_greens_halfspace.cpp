#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latcp/greens_halfspace.hpp"

using namespace latcp;

namespace {

const AtomTransition kAtom = cesium_d2();
const double kW = kAtom.omega;
const double kK = kAtom.k();
const HalfSpace kGlass{cplx(1.45, 0.0)};

template <class F>
cplx simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

// Normalized rates of a dipole above a half-space by direct Sommerfeld
// quadrature on fixed grids (s = sin t on the propagating part, s^2 = 1 + u^2
// on the evanescent part, split where the medium wave turns evanescent).
struct Drexhage {
  double perp, par;
};

Drexhage drexhage(cplx n, double kd) {
  const cplx e = n * n;
  auto s1 = [&](cplx s2) {
    cplx v = std::sqrt(e - s2);
    return v.imag() < 0 ? -v : v;
  };
  auto rs = [&](cplx sz, cplx s2) { return (sz - s1(s2)) / (sz + s1(s2)); };
  auto rp = [&](cplx sz, cplx s2) { return (e * sz - s1(s2)) / (e * sz + s1(s2)); };
  auto prop = [&](bool perp) {
    return simpson(
        [&](double t) -> cplx {
          const double s = std::sin(t);
          const cplx sz = std::cos(t);
          const cplx ph = std::exp(cplx(0.0, 2.0 * kd) * sz);
          return perp ? 1.5 * s * s * s * rp(sz, s * s) * ph : 0.75 * s * (rs(sz, s * s) - sz * sz * rp(sz, s * s)) * ph;
        },
        0.0, kPi / 2, 20000);
  };
  auto evan = [&](bool perp, double a, double b) {
    return simpson(
        [&](double u) -> cplx {
          const double s2 = 1.0 + u * u;
          const cplx sz(0.0, u);
          const cplx w = cplx(0.0, -1.0) * std::exp(-2.0 * kd * u);
          return perp ? 1.5 * s2 * rp(sz, s2) * w : 0.75 * (rs(sz, s2) - sz * sz * rp(sz, s2)) * w;
        },
        a, b, 20000);
  };
  const double kink = std::sqrt(e.real() - 1.0);
  const double top = kink + 40.0 / kd;
  return {1.0 + (prop(true) + evan(true, 0.0, kink) + evan(true, kink, top)).real(),
          1.0 + (prop(false) + evan(false, 0.0, kink) + evan(false, kink, top)).real()};
}

}  // namespace

TEST_CASE("Fresnel coefficients: limits") {
  const auto a = fresnel(kGlass.index, 0.0, kW);
  CHECK(std::abs(a.r_te - cplx(-0.45 / 2.45, 0.0)) <= 1e-15);
  CHECK(std::abs(a.r_tm - cplx(0.45 / 2.45, 0.0)) <= 1e-15);
  const auto v = fresnel(cplx(1.0, 0.0), 0.7 * kK, kW);
  CHECK(std::abs(v.r_te) == 0.0);
  CHECK(std::abs(v.r_tm) == 0.0);
  const auto g = fresnel(kGlass.index, kK * (1 - 1e-12), kW);
  CHECK(std::abs(g.r_te + 1.0) < 1e-5);
  CHECK(std::abs(g.r_tm + 1.0) < 1e-5);
  // evanescent incidence past total internal reflection is lossless only below n k
  const auto t = fresnel(kGlass.index, 1.2 * kK, kW);
  CHECK(std::isfinite(std::abs(t.r_te)));
}

TEST_CASE("G1 vanishes for a vacuum half-space") {
  const Vec3 r(200e-9, 0.0, 0.0);
  const auto g = planar_scattering_green({cplx(1.0, 0.0)}, r, r, kW);
  CHECK(g.G.norm() == 0.0);
  CHECK(g.dzG.norm() == 0.0);
}

TEST_CASE("planar reciprocity and axial antisymmetry") {
  const Vec3 a(150e-9, 0.0, 0.0), b(260e-9, 40e-9, -90e-9);
  const auto ab = planar_scattering_green(kGlass, a, b, kW);
  const auto ba = planar_scattering_green(kGlass, b, a, kW);
  CHECK((ab.G - ba.G.transpose()).norm() <= 1e-8 * ab.G.norm());
  const auto aa = planar_scattering_green(kGlass, a, a, kW);
  CHECK((aa.dzG + aa.dzG.transpose()).norm() <= 1e-8 * aa.dzG.norm());
}

TEST_CASE("Drexhage rates from G1 match direct Sommerfeld quadrature") {
  for (double d : {50e-9, 200e-9, 700e-9}) {
    const auto want = drexhage(kGlass.index, kK * d);
    const Vec3 r(d, 0.0, 0.0);
    const auto g = planar_scattering_green(kGlass, r, r, kW);
    CHECK(1.0 + 6.0 * kPi / kK * g.G(0, 0).imag() == doctest::Approx(want.perp).epsilon(1e-7));
    CHECK(1.0 + 6.0 * kPi / kK * g.G(2, 2).imag() == doctest::Approx(want.par).epsilon(1e-7));
    CHECK(1.0 + 6.0 * kPi / kK * g.G(1, 1).imag() == doctest::Approx(want.par).epsilon(1e-7));
  }
}

TEST_CASE("far-field closed form: zeros, regime flag, symmetry") {
  const double lam = kAtom.wavelength();
  for (int j = 8; j <= 20; ++j) {
    const auto f = retarded_lateral_force(kAtom, j * lam / 4, kGlass);
    const auto peak = retarded_lateral_force(kAtom, (j + 0.5) * lam / 4, kGlass);
    CHECK(std::abs(f.force) <= 1e-12 * std::abs(peak.force));
    CHECK(f.in_regime);
  }
  CHECK_FALSE(retarded_lateral_force(kAtom, 1.9 * lam, kGlass).in_regime);
  const double d = 2.3 * lam;
  CHECK(retarded_lateral_force(cesium_d2(Polarization::SigmaMinus), d, kGlass).force ==
        doctest::Approx(-retarded_lateral_force(kAtom, d, kGlass).force).epsilon(1e-14));
  CHECK(retarded_lateral_force(cesium_d2(Polarization::Pi), d, kGlass).force == 0.0);
  CHECK_THROWS_AS(retarded_lateral_force(kAtom, -1e-9, kGlass), std::invalid_argument);
}

TEST_CASE("numerical planar force: symmetry and sign") {
  const double lam = kAtom.wavelength();
  for (double d : {0.3 * lam, 2.6 * lam}) {
    const double fp = planar_lateral_force(kAtom, d, kGlass);
    CHECK(planar_lateral_force(cesium_d2(Polarization::SigmaMinus), d, kGlass) ==
          doctest::Approx(-fp).epsilon(1e-12));
    CHECK(std::abs(planar_lateral_force(cesium_d2(Polarization::Pi), d, kGlass)) <= 1e-12 * std::abs(fp));
    auto real_dip = kAtom;
    real_dip.dipole = Vec3c(0.6, 0.0, 0.8) * 1.9e-29;
    CHECK(std::abs(planar_lateral_force(real_dip, d, kGlass)) <= 1e-12 * std::abs(fp));
  }
  // deep in the far field the numerical force follows the closed form's sign,
  // with an amplitude ratio drifting towards 2/pi (see README)
  double prev = 1.0;
  for (double f : {2.1, 3.1, 4.1}) {
    const double d = f * lam;
    const double ratio = planar_lateral_force(kAtom, d, kGlass) / retarded_lateral_force(kAtom, d, kGlass).force;
    CHECK(ratio > 2.0 / kPi);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("planar non-resonant lateral force vanishes") {
  std::vector<double> xi;
  for (int i = 1; i <= 20; ++i) xi.push_back(0.5 * i * kW);
  const double d = 100e-9;
  const double nr = planar_nonresonant_lateral(kAtom, d, kGlass, xi);
  CHECK(std::abs(nr) <= 1e-10 * std::abs(planar_lateral_force(kAtom, d, kGlass)));
}
