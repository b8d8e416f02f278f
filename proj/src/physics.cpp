#include "latcp/physics.hpp"

namespace latcp {

Polarization parse_polarization(const std::string& s) {
  if (s == "sigma+" || s == "sigma_plus") return Polarization::SigmaPlus;
  if (s == "sigma-" || s == "sigma_minus") return Polarization::SigmaMinus;
  if (s == "pi") return Polarization::Pi;
  throw std::invalid_argument("unknown polarization '" + s + "' (expected sigma+, sigma- or pi)");
}

std::string to_string(Polarization p) {
  switch (p) {
    case Polarization::SigmaPlus: return "sigma+";
    case Polarization::SigmaMinus: return "sigma-";
    case Polarization::Pi: return "pi";
  }
  return "?";
}

Vec3c dipole_vector(Polarization p, double d0) {
  const cplx i(0.0, 1.0);
  switch (p) {
    case Polarization::SigmaPlus: return Vec3c(i * d0, 0.0, d0);
    case Polarization::SigmaMinus: return Vec3c(-i * d0, 0.0, d0);
    case Polarization::Pi: return Vec3c(0.0, std::sqrt(2.0) * d0, 0.0);
  }
  throw std::logic_error("dipole_vector: bad polarization");
}

AtomTransition cesium_d2(Polarization p) {
  const double lambda = 852e-9;
  return {2.0 * kPi * si::c / lambda, dipole_vector(p, 1.9e-29), 2.207e-25, p};
}

Fiber silica_nanofiber() { return {250e-9, cplx(1.45, 2.05e-7)}; }

double free_space_rate(const AtomTransition& atom) {
  const double k = atom.k();
  return k * k * k * atom.dipole.squaredNorm() / (3.0 * kPi * si::epsilon0 * si::hbar);
}

}  // namespace latcp
