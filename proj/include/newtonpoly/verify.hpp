#pragma once

// The property suite behind `newtonpoly verify`: exact structural identities plus
// shape-level numeric checks on one input H.

#include "newtonpoly/classifier.hpp"
#include "newtonpoly/io.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace npoly::verify {

struct VerifyOptions {
  std::uint64_t seed = 42;
  double delta = 1e-2;         // damping exponent for the pointwise P evaluation
  double bump_radius = 0.5;
  numeric::SweepSpec sweep;    // envelope domination sweep
  int random_corpus = 20;      // product identity corpus size
  bool numeric = true;         // false: exact checks only
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  io::Json details = io::Json::object();
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool passed() const;
  io::Json to_json() const;
};

/// Throws numeric::ToleranceNotMet from the quadrature sweep.
VerifyReport run_suite(const TaylorPoly& H, const AnalysisReport& analysis, const VerifyOptions& opt);

PropertyResult check_scaling(const TaylorPoly& H);
/// q = p^r: N(q) = r N(p) and q_{rF} = (p_F)^r on every compact face, for H and a seeded corpus.
PropertyResult check_products(const TaylorPoly& H, std::uint64_t seed, int corpus);
PropertyResult check_degeneracy(const TaylorPoly& H, const AnalysisReport& analysis);
PropertyResult check_damping_bounds(const TaylorPoly& H, const AnalysisReport& analysis, double delta, std::uint64_t seed);
PropertyResult check_sublevel_brackets(const AnalysisReport& analysis, std::uint64_t seed);
PropertyResult check_domination(const TaylorPoly& H, const AnalysisReport& analysis);
PropertyResult check_envelope(const TaylorPoly& H, const AnalysisReport& analysis, const VerifyOptions& opt);
PropertyResult check_thresholds(const TaylorPoly& H, const AnalysisReport& analysis);

/// Sparse polynomial with `terms` distinct exponents of total degree >= 2 and small rational coefficients.
TaylorPoly random_polynomial(std::mt19937_64& rng, std::size_t n, int terms, int max_exp);

}  // namespace npoly::verify
