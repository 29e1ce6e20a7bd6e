#include "newtonpoly/classifier.hpp"

#include <algorithm>

namespace npoly {

std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::A: return "A";
    case CaseLabel::B: return "B";
    case CaseLabel::C: return "C";
  }
  return "?";
}

std::string to_string(Sharpness s) {
  switch (s) {
    case Sharpness::sharp_if_y_not_in_tangent_plane: return "sharp-if-y-not-in-tangent-plane";
    case Sharpness::sharp_under_factorization_hypothesis: return "sharp-under-factorization-hypothesis";
    case Sharpness::upper_bound_only: return "upper-bound-only";
  }
  return "?";
}

std::string to_string(InterpolationRegime r) {
  switch (r) {
    case InterpolationRegime::d_above_two: return "d>2";
    case InterpolationRegime::m_above_two: return "d<=2<M";
    case InterpolationRegime::both_at_most_two: return "d<=2,M=2";
  }
  return "?";
}

FourierPrediction classify_fourier(int n, const Rational& d, int k, int m) {
  if (d <= 0) throw UnclassifiableInput("Newton distance must be positive");
  if (m < 0) throw UnclassifiableInput("zero order must be nonnegative");
  if (k < 0 || k > n - 1) throw UnclassifiableInput("bisectrix face dimension out of range");

  FourierPrediction p;
  p.d_integer = is_integer(d);
  const Rational two = 2;
  const bool c_case = m > std::max(d, two);
  const bool b_case = !c_case && d >= 2;
  const bool a_case = !c_case && !b_case && d < 2 && m <= 2;
  if (int(c_case) + int(b_case) + int(a_case) != 1) throw UnclassifiableInput("Fourier cases do not partition");

  if (c_case) {
    p.case_label = CaseLabel::C;
    p.epsilon = Rational(1, m);
  } else if (b_case) {
    p.case_label = CaseLabel::B;
    p.epsilon = 1 / d;
    p.log_power = p.d_integer ? n - k : n - k - 1;
    p.lower_bound_log_power = n - k - 1;
  } else {
    p.case_label = CaseLabel::A;
    p.epsilon = Rational(1, 2);
  }
  return p;
}

MaximalPrediction classify_maximal(int n, const Rational& d, int m, int b, const MaximalFlags& flags) {
  (void)n;
  MaximalPrediction p;
  const Rational two = 2;
  p.hessian_ok = flags.hessian_ok;
  p.fallback_b = b;
  if (m > std::max(d, two)) {
    p.case_label = CaseLabel::C;
    p.case_p0 = m;
    if (flags.factorization_hypothesis) p.sharp = Sharpness::sharp_under_factorization_hypothesis;
  } else if (d > 2) {
    p.case_label = CaseLabel::B;
    p.case_p0 = d;
    if (flags.y_not_in_tangent_plane) p.sharp = Sharpness::sharp_if_y_not_in_tangent_plane;
  } else {
    p.case_label = CaseLabel::A;
    p.case_p0 = 2;
  }
  p.p0 = p.case_p0;
  if (!flags.hessian_ok) {
    p.p0 = b;
    p.sharp = Sharpness::upper_bound_only;
    p.warning = "Hessian condition fails: no direction pair has a nonvanishing determinant; only the bound p > b is asserted";
  }
  return p;
}

InterpolationResult interpolation_threshold(const Rational& d, int M) {
  if (d <= 0 || M < 2) throw std::invalid_argument("interpolation_threshold needs d > 0 and M >= 2");
  if (d > 2) {
    Rational a = 2 / (d - 2);
    if (M > 2) a = std::min(a, Rational(2, M - 2));
    return {Threshold{a}, InterpolationRegime::d_above_two};
  }
  if (M > 2) return {Threshold{Rational(2, M - 2)}, InterpolationRegime::m_above_two};
  return {Threshold{}, InterpolationRegime::both_at_most_two};
}

Rational p0_from_threshold(const Threshold& a) {
  if (a.infinite()) return 2;
  return (2 * *a.value + 2) / *a.value;
}

AnalysisReport analyze(const TaylorPoly& H, const AnalysisOptions& opt) {
  AnalysisReport r;
  r.n = static_cast<int>(H.dim());
  r.H = H;
  r.options = opt;
  const NewtonPolyhedron N = build_polyhedron(H);
  r.vertices = N.vertices();
  r.facets = N.facets();
  r.distance = newton_distance(N);
  r.bisectrix = bisectrix_face(N, r.distance);
  r.zeros = zero_orders(H, N, opt.override_m, opt.zero_options);
  r.degeneracy = hessian_condition(H);
  if (r.degeneracy.hessian_condition_holds) r.direction_pair = pick_direction_pair(H);

  r.fourier = classify_fourier(r.n, r.distance.d, r.bisectrix.k, r.zeros.m);
  MaximalFlags flags;
  flags.hessian_ok = r.degeneracy.hessian_condition_holds;
  flags.y_not_in_tangent_plane = opt.y_not_in_tangent_plane;
  flags.factorization_hypothesis = opt.factorization_hypothesis;
  r.maximal = classify_maximal(r.n, r.distance.d, r.zeros.m, r.zeros.b, flags);
  r.interpolation = interpolation_threshold(r.distance.d, r.zeros.M);
  r.p0_interpolated = p0_from_threshold(r.interpolation.a);
  if (r.p0_interpolated != r.maximal.case_p0)
    throw std::logic_error("interpolation threshold disagrees with the maximal case");

  r.conditional_on_m = r.zeros.method == ZeroMethod::numeric_sampled;
  if (r.conditional_on_m)
    r.commentary.push_back("m was found by numeric sampling on faces of dimension >= 2; every prediction is conditional on m");
  if (r.zeros.method == ZeroMethod::user_override)
    r.commentary.push_back("m was supplied by the user: " + opt.override_m->justification);
  if (r.maximal.case_label == CaseLabel::C && !opt.factorization_hypothesis)
    r.commentary.push_back("case C lower bound not asserted; pass the factorization flag to claim p0 = m is sharp");
  if (!r.degeneracy.hessian_condition_holds && r.degeneracy.structural_form)
    r.commentary.push_back("every compact face polynomial is a power of a linear form");
  if (opt.truncation_degree)
    r.commentary.push_back("H is a Taylor truncation at degree " + std::to_string(*opt.truncation_degree) +
                           "; predictions assume the dropped terms lie inside N(H)");
  r.commentary.push_back("only the threshold p0 is predicted; operator norms are not estimated");
  return r;
}

}  // namespace npoly
