#pragma once

// Geometric lambda sweeps of |T(lambda)| and the regression
// log|T| = c - eps log(lambda) + rho log(log(lambda)).

#include "newtonpoly/numeric/oscillatory.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace npoly::numeric {

struct SweepSpec {
  double lambda_min = 1e2;
  double lambda_max = 1e4;
  int samples = 16;
  std::uint64_t seed = 42;
  int bootstrap = 2000;
  /// Residual rms (natural-log units) of the joint fit above which the window counts as preasymptotic.
  double curvature_rms = 1e-3;
  OscillatoryOptions quadrature;
};

struct DecaySample {
  double lambda = 0.0;  // lambda_{n+1}; the linear frequencies are zero
  std::complex<double> T;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool flagged = false;  // quadrature tolerance not met; excluded from the fit
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct DecayFit {
  std::vector<DecaySample> samples;
  double epsilon_hat = 0.0;
  double rho_hat = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double power_only_epsilon = 0.0;  // fit on {1, log lambda}
  double fit_lambda_min = 0.0;
  double fit_lambda_max = 0.0;
  std::size_t fit_count = 0;
  bool curvature_flag = false;  // lowest decade dropped
  Interval rho_ci;              // 95% bootstrap percentile interval
  Interval epsilon_ci;
  std::uint64_t seed = 0;
  int bootstrap = 0;
};

/// Geometric sweep lambda_min .. lambda_max, both ends included.
std::vector<double> sweep_lambdas(const SweepSpec& spec);

/// One quadrature per sweep point; samples that miss the tolerance are flagged, not thrown.
std::vector<DecaySample> sweep_samples(const TaylorPoly& H, const BumpFunction& psi, const SweepSpec& spec);

/// Throws std::invalid_argument for fewer than 12 samples or less than two decades.
DecayFit decay_fit(const TaylorPoly& H, const BumpFunction& psi, const SweepSpec& spec);

/// The regression part alone, on precomputed samples.
DecayFit fit_decay_samples(std::vector<DecaySample> samples, const SweepSpec& spec);

}  // namespace npoly::numeric
