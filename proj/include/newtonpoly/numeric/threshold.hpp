#pragma once

// Numerical integrability threshold sup{t : integral over [-1,1]^n of W^{-t} < inf} for
// W = H* or W = P. Two mechanisms are combined:
//   origin: dyadic shells {max_i k_i = j} around the coordinate cross, fitted growth of the
//           shell sums in j, bisection on the sign of the growth rate;
//   local:  small-value exponent kappa of |{W < s}| ~ s^kappa away from the axes (W = P only).
// The threshold is the smaller of the two.

#include "newtonpoly/numeric/damping.hpp"

#include <limits>
#include <optional>
#include <string>

namespace npoly::numeric {

enum class WeightKind { h_star, damping };

std::string to_string(WeightKind k);

struct ThresholdOptions {
  double t_max = 6.0;
  double t_tol = 1e-3;
  int j_min = 8;
  int j_max = 40;
  int gauss = 6;               // Gauss-Legendre nodes per axis per dyadic rectangle
  int local_grid = 2048;       // local_grid^2 samples over [-1,1]^2
  double local_margin = 1.0 / 16;  // local samples keep min |x_i| >= margin
  int min_count = 50;          // fewest samples that define a level
  double local_fraction = 0.01;  // levels start once this fraction of samples lies below
  double min_halfwidth = 0.05;
  unsigned threads = 0;
};

struct ThresholdBracket {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool inconclusive = false;
  bool contains(double t) const { return lo <= t && t <= hi; }
  bool infinite() const { return hi == std::numeric_limits<double>::infinity(); }
};

struct ThresholdEstimate {
  ThresholdBracket origin;
  ThresholdBracket local;
  ThresholdBracket combined;
  std::string mechanism;  // "origin", "local" or "none"
  std::optional<double> local_exponent;
  std::optional<double> local_stderr;
};

ThresholdEstimate integrability_threshold(const Damping& w, WeightKind kind, const ThresholdOptions& opt = {});

}  // namespace npoly::numeric
