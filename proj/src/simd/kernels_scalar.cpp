#include <algorithm>
#include "newtonpoly/simd/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace npoly::simd {

MonomialTable MonomialTable::from(const TaylorPoly& p) {
  MonomialTable t;
  t.n = p.dim();
  if (t.n > kMaxVars) throw std::invalid_argument("batch evaluation supports at most 8 variables");
  for (const auto& [a, c] : p.terms()) {
    t.coef.push_back(to_double(c));
    for (std::size_t i = 0; i < t.n; ++i) {
      if (a[i] > kMaxExponent) throw std::invalid_argument("exponent too large for batch evaluation");
      t.exps.push_back(a[i]);
      t.max_exp = std::max(t.max_exp, a[i]);
    }
  }
  return t;
}

double bump_profile(double rho, double radius) {
  const double half = 0.5 * radius;
  const double t = (rho - half) / half;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 0.5 * (1.0 - std::cos(std::numbers::pi * t));
  const double u2 = u * u;
  const double s = u2 * u2 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
  return std::clamp(1.0 - s, 0.0, 1.0);  // rounding near u = 1
}

namespace {

void eval_poly_scalar(const MonomialTable& p, const double* const* coords, std::size_t count, double* out) {
  const std::size_t n = p.n;
  const std::size_t T = p.terms();
  double pw[kMaxVars][kMaxExponent + 1];
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      pw[i][0] = 1.0;
      for (int e = 1; e <= p.max_exp; ++e) pw[i][e] = pw[i][e - 1] * coords[i][k];
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      double m = p.coef[t];
      for (std::size_t i = 0; i < n; ++i) m *= pw[i][p.exps[t * n + i]];
      sum += m;
    }
    out[k] = sum;
  }
}

PhaseSum phase_sum_scalar(const double* phase, const double* weight, std::size_t count) {
  PhaseSum s;
  for (std::size_t k = 0; k < count; ++k) {
    s.re += weight[k] * std::cos(phase[k]);
    s.im += weight[k] * std::sin(phase[k]);
  }
  return s;
}

void sincos_scalar(const double* x, std::size_t count, double* s, double* c) {
  for (std::size_t k = 0; k < count; ++k) {
    s[k] = std::sin(x[k]);
    c[k] = std::cos(x[k]);
  }
}

void bump_scalar(const double* r2, std::size_t count, double radius, double* out) {
  for (std::size_t k = 0; k < count; ++k) out[k] = bump_profile(std::sqrt(r2[k]), radius);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", eval_poly_scalar, phase_sum_scalar, sincos_scalar, bump_scalar};
  return table;
}

}  // namespace npoly::simd
