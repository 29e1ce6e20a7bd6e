#pragma once

// Comparison envelopes built from H*: the dyadic majorant integral and the
// derivative-domination ratios on dyadic rectangles
//   R_k = prod_i [2^{-k_i - 1}, 2^{-k_i}]   (positive orthant).

#include "newtonpoly/taylor.hpp"

#include <span>
#include <vector>

namespace npoly::numeric {

/// Integral over |x| <= radius of min(1, (lambda H*(x))^{-1/M}). Supports n = 1 and n = 2.
double dyadic_envelope(const std::vector<MultiIndex>& vertices, int M, double lambda, double radius);

struct DominationOptions {
  int rungs = 6;
  int grid = 8;          // sample points per axis (per subrectangle for the directional form)
  int max_order = 0;     // 0: largest vertex degree
  int subdivisions = 4;  // per axis, directional form only
};

struct DominationRung {
  std::vector<int> k;
  /// min over the grid of max over 1 <= |alpha| <= K of |x^alpha d^alpha H| / H*
  double pointwise = 0.0;
  /// max over alpha of the grid minimum of the same ratio
  double uniform = 0.0;
  /// After rescaling R_k to [1/2,1]^n: min over subrectangles of the best
  /// (y in {-1,0,1}^n, a <= K) ratio min |(y.grad)^a f_R| / max f_R*.
  double directional = 0.0;
};

struct DominationTable {
  std::vector<DominationRung> rungs;
  double pointwise_inf = 0.0;
  double uniform_inf = 0.0;
  double directional_inf = 0.0;
  double pointwise_spread = 0.0;  // max/min - 1 across rungs
};

DominationRung domination_on_rectangle(const TaylorPoly& H, std::span<const int> k, const DominationOptions& opt = {});

/// Rungs k_j = k0 + j * step for j = 0 .. rungs-1.
DominationTable derivative_domination(const TaylorPoly& H, std::span<const int> k0, std::span<const int> step,
                                      const DominationOptions& opt = {});

}  // namespace npoly::numeric
