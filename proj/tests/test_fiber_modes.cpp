#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latcp/fiber_modes.hpp"

using namespace latcp;

namespace {

const double kLambda = 852e-9;
const double kOmega = 2.0 * kPi * si::c / kLambda;
const double kK = kOmega / si::c;

Fiber default_fiber() { return {250e-9, cplx(1.45, 0.0)}; }

// composite Simpson on [a, b] with n (even) panels
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("V number and single-mode flag for the default fiber") {
  const auto m = solve_guided_mode(default_fiber(), kOmega);
  CHECK(m.v_number == doctest::Approx(2.0 * kPi / kLambda * 250e-9 * std::sqrt(1.45 * 1.45 - 1.0)).epsilon(1e-14));
  CHECK(m.v_number == doctest::Approx(1.936).epsilon(1e-3));
  CHECK(m.single_mode);
  CHECK(m.warning.empty());
}

TEST_CASE("HE11 propagation constant") {
  const auto m = solve_guided_mode(default_fiber(), kOmega);
  const double neff = m.beta / kK;
  CHECK(neff > 1.0);
  CHECK(neff < 1.45);
  // scipy bracket-scan oracle on the same characteristic equation
  CHECK(neff == doctest::Approx(1.1422292087238206).epsilon(1e-11));
  const double f0 = std::abs(he11_characteristic(default_fiber(), kOmega, m.beta));
  const double scale = std::max(std::abs(he11_characteristic(default_fiber(), kOmega, m.beta * (1 + 1e-3))),
                                std::abs(he11_characteristic(default_fiber(), kOmega, m.beta * (1 - 1e-3))));
  CHECK(f0 <= 1e-10 * scale);
}

TEST_CASE("group index from the Richardson derivative") {
  const auto m = solve_guided_mode(default_fiber(), kOmega);
  CHECK(m.beta_prime > 1.0 / si::c);
  const double h = 1e-4 * kOmega;
  const double fd = (solve_beta(default_fiber(), kOmega + h) - solve_beta(default_fiber(), kOmega - h)) / (2 * h);
  CHECK(m.beta_prime == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("no cutoff for the fundamental mode") {
  const double w = 2.0 * kPi * si::c / 2e-6;
  const auto m = solve_guided_mode(default_fiber(), w);
  CHECK(m.beta > w / si::c);
  CHECK(m.beta < 1.45 * w / si::c);
}

TEST_CASE("multimode fibers carry a warning") {
  const auto m = solve_guided_mode({600e-9, cplx(1.45, 0.0)}, kOmega);
  CHECK_FALSE(m.single_mode);
  CHECK_FALSE(m.warning.empty());
}

TEST_CASE("no index contrast means no guided mode") {
  CHECK_THROWS_AS(solve_beta({250e-9, cplx(1.0, 0.0)}, kOmega), GeometryError);
}

TEST_CASE("guided profile: continuity, decay, quasi-circular structure") {
  const Fiber f = default_fiber();
  const auto base = solve_guided_mode(f, kOmega);
  for (int fd : {+1, -1}) {
    for (int p : {+1, -1}) {
      const auto m = guided_mode_variant(f, base, fd, p);
      const Vec3c in = guided_profile(f, m, f.radius * (1 - 1e-13)).e;
      const Vec3c out = guided_profile(f, m, f.radius).e;
      const double scale = out.norm();
      CHECK(std::abs(in(1) - out(1)) <= 1e-10 * scale);
      CHECK(std::abs(in(2) - out(2)) <= 1e-10 * scale);
      // normal D is continuous: n^2 e_rho(in) = e_rho(out)
      CHECK(std::abs(1.45 * 1.45 * in(0) - out(0)) <= 1e-9 * scale);
      CHECK(guided_profile(f, m, f.radius + 500e-9).e.norm() < guided_profile(f, m, f.radius + 100e-9).e.norm());
      // e_phi / e_rho is +-i
      const cplx ratio = out(1) / out(0);
      CHECK(std::abs(ratio.real()) <= 1e-10 * std::abs(ratio));
    }
  }
}

TEST_CASE("guided profile: log|e_z| concave-decreasing outside") {
  const Fiber f = default_fiber();
  const auto m = solve_guided_mode(f, kOmega);
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(std::log(std::abs(guided_profile(f, m, f.radius * (1.0 + 0.1 * i)).e(2))));
  for (size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
  // K_1 log is convex-ish in magnitude of slope decrease; slope stays negative and bounded by -kappa
  const double kappa = std::sqrt(m.beta * m.beta - kK * kK);
  const double slope = (v.back() - v[v.size() - 2]) / (0.1 * f.radius);
  CHECK(slope < -0.9 * kappa);
}

TEST_CASE("guided profile: normalization against an independent Simpson rule") {
  const Fiber f = default_fiber();
  const auto base = solve_guided_mode(f, kOmega);
  const double kappa = std::sqrt(base.beta * base.beta - kK * kK);
  for (int p : {+1, -1}) {
    const auto m = guided_mode_variant(f, base, -1, p);
    auto dens = [&](double r, double w) { return 2.0 * kPi * w * guided_profile(f, m, r).e.squaredNorm() * r; };
    const double in = simpson([&](double r) { return dens(r, 1.45 * 1.45); }, 0.0, f.radius * (1 - 1e-15), 20000);
    const double out = simpson([&](double r) { return dens(r, 1.0); }, f.radius, f.radius + 50.0 / kappa, 200000);
    CHECK(in + out == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("guided profile: mirror relation between handedness") {
  const Fiber f = default_fiber();
  const auto base = solve_guided_mode(f, kOmega);
  for (double r : {100e-9, 260e-9, 400e-9}) {
    const Vec3c a = guided_profile(f, guided_mode_variant(f, base, 1, 1), r).e;
    const Vec3c b = guided_profile(f, guided_mode_variant(f, base, 1, -1), r).e;
    CHECK(std::abs(a(0)) == doctest::Approx(std::abs(b(0))).epsilon(1e-10));
    CHECK(std::abs(a(1)) == doctest::Approx(std::abs(b(1))).epsilon(1e-10));
    CHECK(std::abs(a(2)) == doctest::Approx(std::abs(b(2))).epsilon(1e-10));
    const cplx ra = a(1) / a(0), rb = b(1) / b(0);
    CHECK(std::abs(ra + rb) <= 1e-10 * std::abs(ra));
    const cplx za = a(2) / a(0), zb = b(2) / b(0);
    CHECK(std::abs(za - zb) <= 1e-10 * std::abs(za));
  }
}

TEST_CASE("radiation profile: index bounds") {
  const Fiber f = default_fiber();
  CHECK_THROWS_AS(radiation_profile(f, {kOmega, 1.01 * kK, 0, 1}, 300e-9), std::domain_error);
  CHECK_THROWS_AS(radiation_profile(f, {kOmega, kK, 0, 1}, 300e-9), std::domain_error);
  CHECK_THROWS_AS(radiation_profile(f, {kOmega, 0.3 * kK, 0, 2}, 300e-9), std::invalid_argument);
  CHECK_NOTHROW(radiation_profile(f, {kOmega, 0.999 * kK, 3, -1}, 300e-9));
}

TEST_CASE("radiation profile: tangential continuity") {
  const Fiber f = default_fiber();
  for (int m : {-2, 0, 1, 4}) {
    for (int p : {1, -1}) {
      const RadiationModeIndex idx{kOmega, 0.4 * kK, m, p};
      const Vec3c in = radiation_profile(f, idx, f.radius * (1 - 1e-13)).e;
      const Vec3c out = radiation_profile(f, idx, f.radius).e;
      const double scale = out.norm();
      CHECK(std::abs(in(1) - out(1)) <= 1e-9 * scale);
      CHECK(std::abs(in(2) - out(2)) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("radiation profile: without index contrast the scattered part vanishes") {
  // the same vacuum point seen from a thin and a thick vacuum cylinder
  for (int m : {0, 1, -3}) {
    for (int p : {1, -1}) {
      const RadiationModeIndex idx{kOmega, -0.6 * kK, m, p};
      const Vec3c a = radiation_profile({100e-9, cplx(1.0, 0.0)}, idx, 400e-9).e;
      const Vec3c b = radiation_profile({900e-9, cplx(1.0, 0.0)}, idx, 400e-9).e;
      CHECK((a - b).norm() <= 1e-9 * a.norm());
    }
  }
}

TEST_CASE("radiation slice: polarization-summed coupling is basis independent") {
  const Fiber f = default_fiber();
  const double r = 300e-9;
  const Vec3c d(cplx(0, 1), 0.3, 1.0);
  for (int m : {0, 2, -1}) {
    RadiationSlice s(f, kOmega, 0.2 * kK, r, 3);
    double sum = 0.0;
    for (int p : {1, -1}) {
      const Vec3c e = radiation_profile(f, {kOmega, 0.2 * kK, m, p}, r).e;
      sum += std::norm((d.transpose() * e).value());
    }
    CHECK(s.coupling(m, d) == doctest::Approx(sum).epsilon(1e-10));
  }
}
