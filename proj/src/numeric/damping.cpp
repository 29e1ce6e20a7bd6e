#include "newtonpoly/numeric/damping.hpp"

#include "newtonpoly/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace npoly::numeric {

double eval_H_star(const std::vector<MultiIndex>& vertices, std::span<const double> x) {
  double s = 0.0;
  for (const auto& v : vertices) {
    double m = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int k = 0; k < v[i]; ++k) m *= std::abs(x[i]);
    s += m;
  }
  return s;
}

double eval_H_star_star(const TaylorPoly& Hbar, std::span<const double> x) {
  return std::pow(std::max(0.0, Hbar.evaluate(x)), 0.25);
}

Damping::Damping(const TaylorPoly& H, DampingParams params)
    : params_(std::move(params)),
      vertices_(build_polyhedron(H).vertices()),
      Hbar_(hessian_gauge_fourth_power(H)) {
  const std::size_t n = H.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) hess_.push_back({i, j, simd::MonomialTable::from(H.partial(i).partial(j))});
  if (params_.delta < 0) throw std::invalid_argument("damping delta must be nonnegative");
  if (params_.pair && params_.delta > 0) D_table_ = simd::MonomialTable::from(params_.pair->D);
  exponent_ = -1.0 / std::max(to_double(params_.d), 2.0);
}

double Damping::H_star_star(std::span<const double> x) const {
  std::vector<const double*> ptr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ptr[i] = &x[i];
  double v = 0.0;
  hbar_batch(ptr.data(), 1, &v);
  return std::pow(v, 0.25);
}

// Sum of x_i^2 x_j^2 (d_ij H)^2 from separately evaluated Hessian entries. The expanded
// H-bar loses about twice as many digits near zeros of the Hessian.
void Damping::hbar_batch(const double* const* coords, std::size_t count, double* out) const {
  const auto& K = simd::kernels();
  std::fill(out, out + count, 0.0);
  std::vector<double> h(count);
  for (const auto& e : hess_) {
    K.eval_poly(e.table, coords, count, h.data());
    const double mult = e.i == e.j ? 1.0 : 2.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double xi = coords[e.i][k], xj = coords[e.j][k];
      const double t = xi * xj * h[k];
      out[k] += mult * t * t;
    }
  }
}

DampingValue Damping::P(std::span<const double> x) const {
  const double hs = H_star(x);
  const double hss = H_star_star(x);
  double dfac = 1.0;
  if (D_table_) dfac = std::pow(std::abs(params_.pair->D.evaluate(x)), params_.delta);
  if (hs == 0.0) {
    if (hss == 0.0 || dfac == 0.0) return {0.0, false};
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {dfac * std::pow(hs, exponent_) * hss, false};
}

void Damping::log_H_star_batch(const double* const* coords, std::size_t count, double* out) const {
  const std::size_t n = Hbar_.dim();
  for (std::size_t k = 0; k < count; ++k) {
    double s = 0.0;
    for (const auto& v : vertices_) {
      double m = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        for (int e = 0; e < v[i]; ++e) m *= std::abs(coords[i][k]);
      s += m;
    }
    out[k] = std::log(s);
  }
}

void Damping::log_P_batch(const double* const* coords, std::size_t count, double* out) const {
  const auto& K = simd::kernels();
  std::vector<double> hbar(count), dval;
  hbar_batch(coords, count, hbar.data());
  if (D_table_) {
    dval.resize(count);
    K.eval_poly(*D_table_, coords, count, dval.data());
  }
  log_H_star_batch(coords, count, out);
  for (std::size_t k = 0; k < count; ++k) {
    const double log_hss = 0.25 * std::log(std::max(0.0, hbar[k]));
    const double log_d = D_table_ ? params_.delta * std::log(std::abs(dval[k])) : 0.0;
    if (std::isinf(out[k]) && out[k] < 0) {
      out[k] = (std::isinf(log_hss) || std::isinf(log_d)) ? -std::numeric_limits<double>::infinity()
                                                          : std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out[k] = log_d + exponent_ * out[k] + log_hss;
  }
}

DampingValue eval_damping(const DampingParams& p, const TaylorPoly& H, std::span<const double> x) {
  return Damping(H, p).P(x);
}

}  // namespace npoly::numeric
