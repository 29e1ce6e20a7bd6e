#pragma once

// Sublevel sets of monomials on the unit cube: {x in (0,1)^n : x^m < delta}.

#include <cstdint>
#include <optional>
#include <span>

namespace npoly::numeric {

struct SublevelOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct SublevelMeasure {
  std::optional<double> closed_form;  // at most two nonzero exponents
  double mc = 0.0;
  double mc_stderr = 0.0;
  double envelope = 0.0;  // |ln delta|^{l-1} delta^{1/M}
  double M = 0.0;
  int l = 0;  // number of exponents equal to M
};

/// Monte Carlo runs in u = -ln x with exponential tilting toward sum m_i u_i = ln(1/delta).
/// Throws std::invalid_argument unless 0 < delta <= 1 and m >= 0 is not identically zero.
SublevelMeasure sublevel_measure(std::span<const double> m, double delta, const SublevelOptions& opt = {});

struct SublevelIntegral {
  double value = 0.0;  // integral of delta / x^m over {x^m > delta}
  double abs_err = 0.0;
  double envelope = 0.0;
  char regime = 'b';  // 'b': M < 1, 'c': M = 1, 'd': M > 1
  double M = 0.0;
  int l = 0;
};

SublevelIntegral sublevel_integral(std::span<const double> m, double delta);

}  // namespace npoly::numeric
