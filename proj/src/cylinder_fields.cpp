#include "latcp/cylinder_fields.hpp"

namespace latcp {

std::vector<cplx> bessel_j_orders(int nmax, cplx z) {
  auto v = bessel_j_scaled(nmax, z);
  const double g = std::abs(z.imag());
  if (g > 700.0) throw std::overflow_error("bessel_j_orders: |Im z| too large for unscaled values");
  const double s = std::exp(g);
  for (auto& x : v) x *= s;
  return v;
}

std::vector<cplx> hankel1_orders(int nmax, cplx z) {
  auto v = hankel1_scaled(nmax, z);
  if (std::abs(z.imag()) > 700.0) throw std::overflow_error("hankel1_orders: |Im z| too large for unscaled values");
  const cplx s = std::exp(cplx(0.0, 1.0) * z);
  for (auto& x : v) x *= s;
  return v;
}

}  // namespace latcp
