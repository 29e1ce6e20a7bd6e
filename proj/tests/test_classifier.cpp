#include "doctest.h"
#include "newtonpoly/classifier.hpp"
#include "support.hpp"

#include <map>

using namespace npoly;
using testsupport::fixtures;

namespace {
AnalysisReport analyze_named(const std::string& name) {
  for (const auto& f : fixtures())
    if (f.name == name) return analyze(f.H);
  throw std::runtime_error("no fixture " + name);
}
}  // namespace

TEST_CASE("classify_fourier examples") {
  auto a = classify_fourier(2, 1, 1, 0);
  CHECK(a.case_label == CaseLabel::A);
  CHECK(a.epsilon == Rational(1, 2));
  CHECK(a.log_power == 0);

  auto b = classify_fourier(2, 2, 0, 0);
  CHECK(b.case_label == CaseLabel::B);
  CHECK(b.epsilon == Rational(1, 2));
  CHECK(b.log_power == 2);
  REQUIRE(b.lower_bound_log_power);
  CHECK(*b.lower_bound_log_power == 1);

  auto c = classify_fourier(2, 2, 1, 3);
  CHECK(c.case_label == CaseLabel::C);
  CHECK(c.epsilon == Rational(1, 3));

  auto frac = classify_fourier(2, Rational(5, 2), 0, 0);
  CHECK(frac.log_power == 1);
  CHECK_FALSE(frac.d_integer);

  CHECK_THROWS_AS(classify_fourier(2, 0, 0, 0), UnclassifiableInput);
  CHECK_THROWS_AS(classify_fourier(2, 1, 2, 0), UnclassifiableInput);
}

TEST_CASE("classify_maximal examples and sharpness flags") {
  auto a = classify_maximal(2, 1, 0, 2, {});
  CHECK(a.case_label == CaseLabel::A);
  CHECK(a.p0 == 2);

  MaximalFlags off_tangent;
  off_tangent.y_not_in_tangent_plane = true;
  auto b = classify_maximal(2, 3, 0, 6, off_tangent);
  CHECK(b.case_label == CaseLabel::B);
  CHECK(b.p0 == 3);
  CHECK(b.sharp == Sharpness::sharp_if_y_not_in_tangent_plane);
  CHECK(classify_maximal(2, 3, 0, 6, {}).sharp == Sharpness::upper_bound_only);

  MaximalFlags hyp;
  hyp.factorization_hypothesis = true;
  auto c = classify_maximal(2, 2, 3, 3, hyp);
  CHECK(c.case_label == CaseLabel::C);
  CHECK(c.p0 == 3);
  CHECK(c.sharp == Sharpness::sharp_under_factorization_hypothesis);

  MaximalFlags degenerate;
  degenerate.hessian_ok = false;
  auto f = classify_maximal(2, 2, 4, 4, degenerate);
  CHECK(f.p0 == 4);
  CHECK(f.case_p0 == 4);
  CHECK(f.warning.has_value());
  CHECK(f.sharp == Sharpness::upper_bound_only);
}

TEST_CASE("interpolation_threshold regimes") {
  auto r1 = interpolation_threshold(3, 2);
  REQUIRE_FALSE(r1.a.infinite());
  CHECK(*r1.a.value == 2);
  CHECK(p0_from_threshold(r1.a) == 3);

  auto r2 = interpolation_threshold(1, 2);
  CHECK(r2.a.infinite());
  CHECK(p0_from_threshold(r2.a) == 2);

  auto r3 = interpolation_threshold(2, 3);
  CHECK(*r3.a.value == 2);
  CHECK(p0_from_threshold(r3.a) == 3);
  CHECK(r3.regime == InterpolationRegime::m_above_two);
}

TEST_CASE("totality, interpolation consistency and monotonicity on a grid") {
  for (int dn = 1; dn <= 24; ++dn)
    for (int dd = 1; dd <= 4; ++dd)
      for (int m = 0; m <= 8; ++m) {
        const Rational d(dn, dd);
        auto f = classify_fourier(2, d, 0, m);
        auto mx = classify_maximal(2, d, m, 2, {});
        auto l = interpolation_threshold(d, std::max(2, m));
        CHECK(p0_from_threshold(l.a) == mx.p0);
        if (mx.case_label == CaseLabel::B) CHECK(mx.p0 == d);
        if (f.case_label == CaseLabel::C) CHECK(f.epsilon == Rational(1, m));
        if (m >= 1) {
          auto prev = classify_maximal(2, d, m - 1, 2, {});
          CHECK(prev.p0 <= mx.p0);
          auto fprev = classify_fourier(2, d, 0, m - 1);
          CHECK(fprev.epsilon >= f.epsilon);
        }
        const Rational d2 = d + Rational(1, 4);
        CHECK(classify_maximal(2, d2, m, 2, {}).p0 >= mx.p0);
        CHECK(classify_fourier(2, d2, 0, m).epsilon <= f.epsilon);
      }
}

TEST_CASE("d = 2 is Fourier case B and maximal case A") {
  auto r = analyze_named("x1^4+x2^4");
  CHECK(r.distance.d == 2);
  CHECK(r.fourier.case_label == CaseLabel::B);
  CHECK(r.maximal.case_label == CaseLabel::A);
}

TEST_CASE("fixture ladder") {
  struct Expect {
    Rational d;
    int k;
    int m;
    CaseLabel fourier;
    Rational eps;
    int log_power;
    Rational p0;
  };
  const std::map<std::string, Expect> ladder = {
      {"x1^2+x2^2", {1, 1, 0, CaseLabel::A, Rational(1, 2), 0, 2}},
      {"x1^2x2^2", {2, 0, 0, CaseLabel::B, Rational(1, 2), 2, 2}},
      {"x1^4+x2^4", {2, 1, 0, CaseLabel::B, Rational(1, 2), 1, 2}},
      {"(x2-x1^2)^2", {Rational(4, 3), 1, 2, CaseLabel::A, Rational(1, 2), 0, 2}},
      {"(x2-x1^2)^3", {2, 1, 3, CaseLabel::C, Rational(1, 3), 0, 3}},
      {"x1^6+x2^6", {3, 1, 0, CaseLabel::B, Rational(1, 3), 1, 3}},
  };
  for (const auto& [name, e] : ladder) {
    CAPTURE(name);
    auto r = analyze_named(name);
    CHECK(r.distance.d == e.d);
    CHECK(r.bisectrix.k == e.k);
    CHECK(r.zeros.m == e.m);
    CHECK(r.fourier.case_label == e.fourier);
    CHECK(r.fourier.epsilon == e.eps);
    CHECK(r.fourier.log_power == e.log_power);
    CHECK(r.maximal.p0 == e.p0);
    CHECK(r.degeneracy.hessian_condition_holds);
  }
  CHECK(analyze_named("x1^2x2^2").maximal.case_label == CaseLabel::A);
}
