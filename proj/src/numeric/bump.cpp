#include "newtonpoly/numeric/bump.hpp"

#include "newtonpoly/simd/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace npoly::numeric {

BumpFunction::BumpFunction(std::size_t n, double radius) : n_(n), radius_(radius) {
  if (n == 0) throw std::invalid_argument("bump dimension must be positive");
  if (!(radius > 0)) throw std::invalid_argument("bump radius must be positive");
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n);
  const double half = 0.5 * radius;
  const double plateau = std::pow(half, static_cast<double>(n)) / static_cast<double>(n);
  auto ramp = [&](double rho) { return simd::bump_profile(rho, radius) * std::pow(rho, static_cast<double>(n - 1)); };
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(ramp, half, radius, 15, 1e-15);
  mass_ = sphere * (plateau + tail);
}

double BumpFunction::operator()(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("bump evaluated at a point of the wrong dimension");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return simd::bump_profile(std::sqrt(r2), radius_);
}

}  // namespace npoly::numeric
