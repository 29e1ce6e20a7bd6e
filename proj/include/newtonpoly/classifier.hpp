#pragma once

// Case logic turning (n, d, k, m, M, b) into a Fourier decay law and a maximal
// operator threshold. Pure functions; no numerics.

#include "newtonpoly/face_zeros.hpp"
#include "newtonpoly/newton.hpp"
#include "newtonpoly/rational.hpp"
#include "newtonpoly/taylor.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npoly {

enum class CaseLabel { A, B, C };
std::string to_string(CaseLabel c);

class UnclassifiableInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FourierPrediction {
  Rational epsilon;
  int log_power = 0;
  CaseLabel case_label = CaseLabel::A;
  bool d_integer = false;
  std::optional<int> lower_bound_log_power;  // case B only
};

/// Precedence C, then B, then A. Throws UnclassifiableInput on d <= 0, m < 0 or k out of range.
FourierPrediction classify_fourier(int n, const Rational& d, int k, int m);

enum class Sharpness { sharp_if_y_not_in_tangent_plane, sharp_under_factorization_hypothesis, upper_bound_only };
std::string to_string(Sharpness s);

struct MaximalFlags {
  bool hessian_ok = true;
  bool y_not_in_tangent_plane = false;  // caller asserts y is off T_y(S)
  bool factorization_hypothesis = false;  // caller asserts the unboundedness hypothesis for p <= m
};

struct MaximalPrediction {
  Rational p0;       // effective threshold: case_p0, or b when the Hessian condition fails
  Rational case_p0;  // value from the case analysis alone
  CaseLabel case_label = CaseLabel::A;
  Sharpness sharp = Sharpness::upper_bound_only;
  bool hessian_ok = true;
  int fallback_b = 0;
  std::optional<std::string> warning;
};

/// With hessian_ok false, p0 is replaced by the fallback b and a warning is attached.
MaximalPrediction classify_maximal(int n, const Rational& d, int m, int b, const MaximalFlags& flags);

/// An extended rational: nullopt encodes +infinity.
struct Threshold {
  std::optional<Rational> value;
  bool infinite() const { return !value.has_value(); }
};

enum class InterpolationRegime { d_above_two, m_above_two, both_at_most_two };
std::string to_string(InterpolationRegime r);

struct InterpolationResult {
  Threshold a;
  InterpolationRegime regime;
};

InterpolationResult interpolation_threshold(const Rational& d, int M);

/// (2a + 2) / a, and 2 for a = +infinity.
Rational p0_from_threshold(const Threshold& a);

struct AnalysisOptions {
  std::optional<MOverride> override_m;
  NumericZeroOptions zero_options;
  bool y_not_in_tangent_plane = false;
  bool factorization_hypothesis = false;
  std::optional<int> truncation_degree;  // set when H is a truncated Taylor expansion
};

struct AnalysisReport {
  int n = 0;
  TaylorPoly H;
  std::vector<MultiIndex> vertices;
  std::vector<Facet> facets;
  NewtonDistance distance;
  BisectrixFace bisectrix;
  ZeroOrderReport zeros;
  DegeneracyReport degeneracy;
  std::optional<DirectionPair> direction_pair;
  FourierPrediction fourier;
  MaximalPrediction maximal;
  InterpolationResult interpolation;
  Rational p0_interpolated;
  bool conditional_on_m = false;
  AnalysisOptions options;
  std::vector<std::string> commentary;
};

/// Runs geometry, zero orders, degeneracy and both classifications on H.
AnalysisReport analyze(const TaylorPoly& H, const AnalysisOptions& opt = {});

}  // namespace npoly
