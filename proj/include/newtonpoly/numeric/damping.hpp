#pragma once

// Damping quantities built from H:
//   H*(x)  = sum over vertices v of |x^v|
//   H**(x) = (sum_{i,j} x_i^2 x_j^2 (d_ij H(x))^2)^{1/4}
//   P(x)   = |D(x)|^delta H*(x)^{-1/max(d,2)} H**(x)

#include "newtonpoly/face_zeros.hpp"
#include "newtonpoly/rational.hpp"
#include "newtonpoly/simd/kernels.hpp"
#include "newtonpoly/taylor.hpp"

#include <optional>
#include <span>
#include <vector>

namespace npoly::numeric {

double eval_H_star(const std::vector<MultiIndex>& vertices, std::span<const double> x);

/// Uses the exact fourth power H-bar; pass hessian_gauge_fourth_power(H) to avoid recomputing it.
double eval_H_star_star(const TaylorPoly& Hbar, std::span<const double> x);

struct DampingParams {
  double delta = 1e-2;
  std::optional<DirectionPair> pair;  // D = 0 factor is skipped when absent or delta == 0
  Rational d;
  int M = 2;
};

struct DampingValue {
  double value = 0.0;
  bool singular = false;  // H* = 0 while H** != 0
};

/// Precomputed evaluator for P on one H.
class Damping {
 public:
  Damping(const TaylorPoly& H, DampingParams params);

  const DampingParams& params() const { return params_; }
  const std::vector<MultiIndex>& vertices() const { return vertices_; }
  const TaylorPoly& Hbar() const { return Hbar_; }

  double H_star(std::span<const double> x) const { return eval_H_star(vertices_, x); }
  double H_star_star(std::span<const double> x) const;
  DampingValue P(std::span<const double> x) const;

  /// log P on a batch of points given in structure-of-arrays form; -inf where P = 0 and
  /// NaN at singular samples.
  void log_P_batch(const double* const* coords, std::size_t count, double* out) const;
  void log_H_star_batch(const double* const* coords, std::size_t count, double* out) const;

 private:
  DampingParams params_;
  std::vector<MultiIndex> vertices_;
  TaylorPoly Hbar_;
  std::optional<simd::MonomialTable> D_table_;
  void hbar_batch(const double* const* coords, std::size_t count, double* out) const;

  struct HessianEntry {
    std::size_t i, j;
    simd::MonomialTable table;
  };
  std::vector<HessianEntry> hess_;
  double exponent_;  // -1 / max(d, 2)
};

DampingValue eval_damping(const DampingParams& p, const TaylorPoly& H, std::span<const double> x);

}  // namespace npoly::numeric
