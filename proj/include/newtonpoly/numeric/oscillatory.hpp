#pragma once

// T(lambda) = integral of exp(-i (lambda_1 x_1 + ... + lambda_n x_n + lambda_{n+1} H(x))) psi(x) dx.

#include "newtonpoly/numeric/bump.hpp"
#include "newtonpoly/taylor.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace npoly::numeric {

struct OscillatoryOptions {
  double tol = 1e-3;             // relative error target
  int cells_per_axis = 32;       // coarse cells over [-r, r]
  double nodes_per_period = 8;   // at the base resolution
  int max_doublings = 3;         // resolution schedule 1, 2, 4, ... 2^max_doublings
  unsigned threads = 0;          // 0: default_thread_count()
};

struct OscillatoryResult {
  std::complex<double> value;
  double abs_err = 0.0;  // |T(2s) - T(s)|
  double rel_err = 0.0;
  int resolution = 1;     // s of the coarser member of the accepted pair
  std::uint64_t nodes = 0;
};

class ToleranceNotMet : public std::runtime_error {
 public:
  ToleranceNotMet(const OscillatoryResult& best, double tol);
  OscillatoryResult best;
};

/// Composite 8-point Gauss-Legendre on a cell grid; per cell, panel counts follow the sampled
/// phase gradient. Nodes never lie on coordinate hyperplanes.
OscillatoryResult oscillatory_integral(const TaylorPoly& H, const BumpFunction& psi, std::span<const double> lambda,
                                       const OscillatoryOptions& opt = {});

}  // namespace npoly::numeric
