#include "newtonpoly/classifier.hpp"
#include "newtonpoly/numeric/bump.hpp"
#include "newtonpoly/numeric/damping.hpp"
#include "newtonpoly/numeric/decay.hpp"
#include "newtonpoly/numeric/oscillatory.hpp"
#include "support.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

using namespace npoly;
using namespace npoly::numeric;
using testsupport::poly;

TEST_CASE("bump: support, plateau and mass against a Cartesian midpoint sum") {
  const BumpFunction psi(2, 0.5);
  CHECK(psi.smoothness() >= 3);
  const double z[2] = {0.0, 0.0}, in[2] = {0.1, 0.2}, edge[2] = {0.5, 0.0}, out[2] = {0.4, 0.4};
  CHECK(psi(z) == 1.0);
  CHECK(psi(in) == 1.0);
  CHECK(psi(edge) == 0.0);
  CHECK(psi(out) == 0.0);

  // The integrand is C^7 with compact support, so the midpoint rule converges very fast.
  const int N = 1200;
  const double h = 1.0 / N;
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double x[2] = {-0.5 + (i + 0.5) * h, -0.5 + (j + 0.5) * h};
      s += psi(x);
    }
  CHECK(psi.mass() == doctest::Approx(s * h * h).epsilon(1e-9));

  const BumpFunction line(1, 1.0);
  double s1 = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = -1.0 + (i + 0.5) * 1e-5;
    s1 += line(std::span<const double>(&x, 1));
  }
  CHECK(line.mass() == doctest::Approx(s1 * 1e-5).epsilon(1e-9));
}

TEST_CASE("oscillatory integral: zero frequency, conjugate symmetry, stationary phase") {
  const auto x1 = testsupport::x(2, 0), x2 = testsupport::x(2, 1);
  const BumpFunction psi(2, 0.5);
  const double zero[3] = {0, 0, 0};
  for (const auto& f : testsupport::fixtures()) {
    const auto r = oscillatory_integral(f.H, psi, zero);
    CHECK(r.value.real() == doctest::Approx(psi.mass()).epsilon(1e-6));
    CHECK(std::abs(r.value.imag()) < 1e-12);
  }

  const TaylorPoly H = x1 * x1 * x2 * x2 + x1.pow(3);
  const double lp[3] = {3.0, -2.0, 50.0}, lm[3] = {-3.0, 2.0, -50.0};
  const auto a = oscillatory_integral(H, psi, lp), b = oscillatory_integral(H, psi, lm);
  CHECK(std::abs(a.value - std::conj(b.value)) < 1e-10);
  CHECK(a.rel_err < 1e-3);

  // psi = 1 near the only critical point; the remainder is beyond all orders here.
  const double lam = 1000.0;
  const double l3[3] = {0, 0, lam};
  const auto c = oscillatory_integral(x1 * x1 + x2 * x2, psi, l3);
  const std::complex<double> stationary(0.0, -M_PI / lam);
  CHECK(std::abs(c.value - stationary) < 1e-3 * std::abs(stationary));
}

TEST_CASE("oscillatory integral: unreachable tolerance reports the best estimate") {
  const auto x1 = testsupport::x(2, 0), x2 = testsupport::x(2, 1);
  const BumpFunction psi(2, 0.5);
  OscillatoryOptions opt;
  opt.tol = 1e-12;
  opt.cells_per_axis = 2;
  opt.nodes_per_period = 0.5;
  opt.max_doublings = 1;
  const double l[3] = {0, 0, 3000};
  try {
    (void)oscillatory_integral(x1 * x1 + x2 * x2, psi, l, opt);
    FAIL("expected ToleranceNotMet");
  } catch (const ToleranceNotMet& e) {
    CHECK(std::isfinite(e.best.abs_err));
    CHECK(std::abs(e.best.value) > 0);
  }
}

TEST_CASE("decay regression recovers synthetic power and log laws exactly") {
  SweepSpec spec;
  spec.bootstrap = 400;
  std::vector<DecaySample> s;
  for (double lam : sweep_lambdas(spec)) {
    DecaySample d;
    d.lambda = lam;
    d.T = 0.7 * std::pow(lam, -0.5) * std::log(lam);
    s.push_back(d);
  }
  const DecayFit f = fit_decay_samples(s, spec);
  CHECK(f.epsilon_hat == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(f.rho_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(f.curvature_flag);
  CHECK(f.rho_ci.contains(1.0));
  CHECK(f.fit_count == 16);

  // A second power law dominating at small lambda bends the log-log curve.
  for (auto& d : s) d.T = std::pow(d.lambda, -1.0 / 3) + 30.0 * std::pow(d.lambda, -1.0);
  const DecayFit g = fit_decay_samples(s, spec);
  CHECK(g.curvature_flag);
  CHECK(g.fit_lambda_min > spec.lambda_min * 9.9);

  SweepSpec bad = spec;
  bad.samples = 8;
  CHECK_THROWS_AS(sweep_lambdas(bad), std::invalid_argument);
  bad = spec;
  bad.lambda_max = 5e2;
  CHECK_THROWS_AS(sweep_lambdas(bad), std::invalid_argument);
}

TEST_CASE("decay fit on the nondegenerate quadratic is the stationary-phase rate") {
  const auto x1 = testsupport::x(2, 0), x2 = testsupport::x(2, 1);
  SweepSpec spec;
  spec.samples = 12;
  spec.bootstrap = 200;
  const DecayFit f = decay_fit(x1 * x1 + x2 * x2, BumpFunction(2, 0.5), spec);
  CHECK(f.epsilon_hat == doctest::Approx(1.0).epsilon(0.1));
  CHECK(std::abs(f.rho_hat) < 0.3);
  for (const auto& d : f.samples) CHECK(d.rel_err < 1e-3);
}

TEST_CASE("damping quantities on hand-checked points") {
  const auto x1 = testsupport::x(2, 0), x2 = testsupport::x(2, 1);
  const std::vector<MultiIndex> circle{MultiIndex{2, 0}, MultiIndex{0, 2}};
  const double p11[2] = {1, 1}, half[2] = {0.5, 0.5}, q[2] = {0.5, 0.25}, e1[2] = {1, 0}, o[2] = {0, 0};
  CHECK(eval_H_star(circle, p11) == 2.0);
  CHECK(eval_H_star({MultiIndex{2, 2}}, half) == 1.0 / 16);
  CHECK(eval_H_star({MultiIndex{0, 2}, MultiIndex{4, 0}}, q) == 1.0 / 8);

  const TaylorPoly Q = x1 * x1 + x2 * x2;
  CHECK(eval_H_star_star(hessian_gauge_fourth_power(Q), e1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_H_star_star(hessian_gauge_fourth_power(x1 * x2), p11) == doctest::Approx(std::pow(2.0, 0.25)));
  for (const auto& f : testsupport::fixtures()) CHECK(eval_H_star_star(hessian_gauge_fourth_power(f.H), o) == 0.0);

  DampingParams p;
  p.delta = 0.0;
  p.d = 1;
  CHECK(eval_damping(p, Q, e1).value == doctest::Approx(std::sqrt(2.0)));

  const TaylorPoly X = x1 * x1 * x2 * x2;
  const TaylorPoly Xbar = hessian_gauge_fourth_power(X);
  const Rational ones[2] = {1, 1};
  CHECK(Xbar.evaluate(std::span<const Rational>(ones)) == 40);
  p.d = 2;
  CHECK(eval_damping(p, X, p11).value == doctest::Approx(std::pow(40.0, 0.25)));

  // A zero of D kills P whenever delta > 0.
  DampingParams pd;
  pd.delta = 1e-2;
  pd.d = 2;
  pd.pair = pick_direction_pair(X);
  const double on_axis[2] = {0.3, 0.0};
  CHECK(pd.pair->D.evaluate(std::span<const double>(on_axis)) == 0.0);
  CHECK(Damping(X, pd).P(on_axis).value == 0.0);

  // Batch and pointwise evaluators agree.
  const Damping W(X, pd);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(64), b(64), lp(64), lh(64);
  for (int i = 0; i < 64; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  const double* c[2] = {a.data(), b.data()};
  W.log_P_batch(c, 64, lp.data());
  W.log_H_star_batch(c, 64, lh.data());
  for (int i = 0; i < 64; ++i) {
    const double x[2] = {a[i], b[i]};
    CHECK(lp[i] == doctest::Approx(std::log(W.P(x).value)).epsilon(1e-10));
    CHECK(lh[i] == doctest::Approx(std::log(W.H_star(x))).epsilon(1e-12));
  }
}

TEST_CASE("P is zero, not singular, where H* vanishes") {
  // H-bar lives in 2 N(H), so it vanishes on every coordinate hyperplane on which H* does.
  const auto x1 = testsupport::x(2, 0), x2 = testsupport::x(2, 1);
  for (const TaylorPoly& H : {x1 * x1 * x2 * x2, x1 * x1 + x1 * x1 * x2, x1.pow(3)}) {
    const Damping W(H, DampingParams{.delta = 0.0, .d = 2});
    for (double t : {-0.7, 0.3}) {
      const double on_axis[2] = {0.0, t};
      CHECK(W.H_star(on_axis) == 0.0);
      CHECK_FALSE(W.P(on_axis).singular);
      CHECK(W.P(on_axis).value == 0.0);
    }
  }
}

namespace {

double max_ratio(const TaylorPoly& H, int samples, double radius, bool hss) {
  const Damping W(H, DampingParams{});
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-radius, radius);
  double worst = 0.0;
  for (int i = 0; i < samples;) {
    double x[2] = {u(rng), u(rng)};
    if (x[0] * x[0] + x[1] * x[1] > radius * radius) continue;
    ++i;
    const double hs = W.H_star(x);
    const double r = hss ? W.H_star_star(x) / std::sqrt(hs) : std::abs(H.evaluate(std::span<const double>(x))) / hs;
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

TEST_CASE("H** is dominated by H*^(1/2) and |H| by H*, with stable constants") {
  for (const auto& f : testsupport::fixtures()) {
    CAPTURE(f.name);
    const double c1 = max_ratio(f.H, 10000, 1.0, true), c2 = max_ratio(f.H, 40000, 1.0, true);
    CHECK(std::isfinite(c1));
    CHECK(c2 <= 1.1 * c1);
    const double d1 = max_ratio(f.H, 10000, 0.1, false), d2 = max_ratio(f.H, 40000, 0.1, false);
    CHECK(std::isfinite(d1));
    CHECK(d2 <= 1.1 * d1);
  }
}
