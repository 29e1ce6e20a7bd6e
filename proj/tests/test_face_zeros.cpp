#include "doctest.h"
#include "newtonpoly/face_zeros.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace npoly;
using testsupport::x;

namespace {

FaceRecord edge_of(const TaylorPoly& f) {
  for (const auto& F : build_polyhedron(f).compact_faces())
    if (F.dim == 1) return F;
  throw std::runtime_error("no edge");
}

// Sampling oracle on g(s) = f_F(sign, s): locate near-zeros of |g| on a dense grid, refine by
// ternary search, then count consecutive derivatives that also vanish there.
int sampled_edge_order(const TaylorPoly& fF) {
  int best = 0;
  std::vector<TaylorPoly> ders{fF};
  std::vector<double> scales;
  for (int k = 0; k < 12; ++k) ders.push_back(ders.back().partial(1));
  for (const auto& d : ders) {
    double scale = 0;
    for (const auto& [a, c] : d.terms()) scale += std::abs(to_double(c));
    scales.push_back(scale);
  }
  for (double sign : {1.0, -1.0}) {
    auto g = [&](int j, double s) {
      std::vector<double> pt{sign, s};
      return scales[j] > 0 ? ders[j].evaluate(std::span<const double>(pt)) / scales[j] : 0.0;
    };
    const int N = 40000;
    const double lo = -8, hi = 8, h = (hi - lo) / N;
    for (int i = 1; i < N; ++i) {
      const double s = lo + i * h;
      if (std::abs(s) < 1e-3) continue;
      const double v = std::abs(g(0, s));
      if (!(v <= std::abs(g(0, s - h)) && v <= std::abs(g(0, s + h)))) continue;
      double a = s - h, b = s + h;
      for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if (std::abs(g(0, m1)) < std::abs(g(0, m2)))
          b = m2;
        else
          a = m1;
      }
      const double r = 0.5 * (a + b);
      if (std::abs(g(0, r)) > 1e-9) continue;
      int order = 1;
      while (order < 12 && std::abs(g(order, r)) < 1e-3) ++order;
      best = std::max(best, order);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("zero order examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  auto circle = x1 * x1 + x2 * x2;
  CHECK(zero_order_on_face(circle, edge_of(circle)).order == 0);

  auto p = (x2 - x1 * x1).pow(2);
  auto fz = zero_order_on_face(p, edge_of(p));
  CHECK(fz.order == 2);
  CHECK(fz.method == ZeroMethod::exact_univariate);
  REQUIRE(fz.witness);
  CHECK(p.evaluate(std::span<const double>(*fz.witness)) == doctest::Approx(0).epsilon(1e-12));

  auto mono = x1 * x1 * x2 * x2;
  CHECK(zero_order_on_face(mono, build_polyhedron(mono).compact_faces().front()).order == 0);

  // Only even edge direction: x1^2 - x2^2 has roots s = +-1 reachable on both branches.
  auto hyper = x1 * x1 - x2 * x2;
  CHECK(zero_order_on_face(hyper, edge_of(hyper)).order == 1);
  // x1^2 + 2 x1 x2 + x2^2 = (x1 + x2)^2 needs the negative branch.
  auto sq = (x1 + x2).pow(2);
  CHECK(zero_order_on_face(sq, edge_of(sq)).order == 2);
  // (x2 - x1^2)^2 + ... with even delta: x2^2 + 2x1^2x2 + x1^4 = (x2 + x1^2)^2 vanishes on x2 = -x1^2.
  auto neg = (x2 + x1 * x1).pow(2);
  CHECK(zero_order_on_face(neg, edge_of(neg)).order == 2);
}

TEST_CASE("edge orders agree with a sampling oracle on n = 2 fixtures") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  std::vector<TaylorPoly> corpus;
  for (const auto& f : testsupport::fixtures()) corpus.push_back(f.H);
  corpus.push_back((x2 - x1 * x1 * Rational(2)).pow(2) * (x2 + x1 * x1));
  corpus.push_back((x2 * x2 - x1.pow(3) * Rational(3)) * (x2 * x2 - x1.pow(3) * Rational(3)));
  corpus.push_back(x1.pow(4) - x2.pow(4));
  for (const auto& H : corpus) {
    CAPTURE(to_string(H));
    for (const auto& F : build_polyhedron(H).compact_faces()) {
      if (F.dim != 1) continue;
      const auto fF = face_restrict(H, F);
      CHECK(zero_order_on_face(fF, F).order == sampled_edge_order(fF));
    }
  }
}

TEST_CASE("numeric zero order on two-dimensional faces") {
  const auto y1 = x(3, 0), y2 = x(3, 1), y3 = x(3, 2);
  struct Case {
    TaylorPoly f;
    int order;
  };
  const std::vector<Case> cases = {
      {y1 * y1 + y2 * y2 + y3 * y3, 0},
      {y1 * y1 + y2 * y2 - y3 * y3, 1},
      {(y1 + y2 + y3).pow(2), 2},
      {(y1 + y2 - y3 * Rational(2)).pow(3), 3},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.f));
    const auto faces = build_polyhedron(c.f).compact_faces();
    const auto& top = faces.back();
    REQUIRE(top.dim == 2);
    auto fz = zero_order_on_face(face_restrict(c.f, top), top);
    CHECK(fz.method == ZeroMethod::numeric_sampled);
    CHECK(fz.order == c.order);
  }
  auto rep = zero_orders(cases[2].f, build_polyhedron(cases[2].f));
  CHECK(rep.method == ZeroMethod::numeric_sampled);
  CHECK(rep.m == 2);
}

TEST_CASE("zero_orders report, b and override") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  const auto H = (x2 - x1 * x1).pow(3);
  const auto N = build_polyhedron(H);
  auto rep = zero_orders(H, N);
  CHECK(rep.m == 3);
  CHECK(rep.M == 3);
  CHECK(rep.b == 3);
  CHECK(rep.method == ZeroMethod::exact_univariate);
  auto over = zero_orders(H, N, MOverride{5, "known from a factorization"});
  CHECK(over.m == 5);
  CHECK(over.method == ZeroMethod::user_override);

  std::mt19937_64 rng(29);
  for (int i = 0; i < 20; ++i) {
    const auto f = testsupport::random_sparse(rng, 2, 5, 6);
    int minimum = 1000;
    for (const auto& [a, c] : f.terms()) minimum = std::min(minimum, a.total_degree());
    CHECK(zero_orders(f, build_polyhedron(f)).b == minimum);
  }
}

TEST_CASE("second partial nonvanishing examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(second_partial_nonvanishing(x1 * x1 + x2 * x2, std::vector<Rational>{1, 1}));
  CHECK_FALSE(second_partial_nonvanishing((x2 - x1 * x1).pow(3), std::vector<Rational>{1, 1}));
  CHECK(second_partial_nonvanishing(x1 * x2, std::vector<Rational>{3, 5}));
}

TEST_CASE("second partials survive wherever f_F is nonzero or has a simple zero") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  std::vector<TaylorPoly> corpus;
  for (const auto& f : testsupport::fixtures()) corpus.push_back(f.H);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(1, 40);
  std::bernoulli_distribution neg(0.5);
  for (const auto& H : corpus)
    for (const auto& F : build_polyhedron(H).compact_faces()) {
      const auto fF = face_restrict(H, F);
      for (int t = 0; t < 200; ++t) {
        std::vector<Rational> y{Rational(num(rng) * (neg(rng) ? -1 : 1), 7),
                                Rational(num(rng) * (neg(rng) ? -1 : 1), 11)};
        if (fF.evaluate(y) != 0) CHECK(second_partial_nonvanishing(fF, y));
      }
    }
  // Simple zero at (1,1) of a quasi-homogeneous cubic.
  const auto cubic = x1 * x1 * x2 - x1 * x2 * x2;
  CHECK(second_partial_nonvanishing(cubic, std::vector<Rational>{1, 1}));
}

TEST_CASE("hessian condition and structural extraction") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(hessian_condition(x1 * x1 + x2 * x2).hessian_condition_holds);

  auto q = hessian_condition((x1 + x2).pow(4));
  CHECK_FALSE(q.hessian_condition_holds);
  REQUIRE(q.structural_form);
  REQUIRE(q.common_m);
  CHECK(*q.common_m == 4);
  for (const auto& s : *q.structural_form) {
    if (s.face.dim != 1) continue;
    CHECK(s.c == 1);
    CHECK(s.beta == RationalVector{1, 1});
    CHECK(s.m == 4);
  }

  auto c = hessian_condition(x1.pow(3));
  CHECK_FALSE(c.hessian_condition_holds);
  CHECK(c.axis_vertex_only);
}

TEST_CASE("degenerate Hessian forces powers of one linear form") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
    TaylorPoly L(n);
    for (std::size_t i = 0; i < n; ++i) {
      int v = 0;
      while (v == 0) v = num(rng);
      L = L + x(n, i) * v;
    }
    const int m = 3 + t % 3;
    const int cf = 1 + t % 4;
    const auto H = L.pow(static_cast<unsigned>(m)) * cf;
    const auto rep = hessian_condition(H);
    CHECK_FALSE(rep.hessian_condition_holds);
    REQUIRE(rep.structural_form);
    REQUIRE(rep.common_m);
    CHECK(*rep.common_m == m);
    const auto N = build_polyhedron(H);
    REQUIRE(N.vertices().size() >= 2);
    for (const auto& v : N.vertices()) {
      int nonzero = 0;
      for (std::size_t i = 0; i < n; ++i) nonzero += v[i] != 0;
      CHECK(nonzero == 1);
      CHECK(v.total_degree() == m);
    }
    CHECK(Rational(m) > newton_distance(N).d);
    for (const auto& s : *rep.structural_form) {
      TaylorPoly lin(n);
      for (std::size_t i = 0; i < n; ++i) lin = lin + x(n, i) * s.beta[i];
      CHECK(lin.pow(static_cast<unsigned>(s.m)) * s.c == face_restrict(H, s.face));
    }
  }
}

TEST_CASE("direction pairs") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  auto a = pick_direction_pair(x1 * x1 + x2 * x2);
  CHECK(a.u == RationalVector{1, 0});
  CHECK(a.v == RationalVector{0, 1});
  CHECK(a.D == TaylorPoly::constant(2, 4));
  auto b = pick_direction_pair(x1 * x1 * x2 * x2);
  CHECK(b.D == x1 * x1 * x2 * x2 * Rational(-12));
  CHECK_THROWS_AS(pick_direction_pair((x1 + x2).pow(4)), NoNondegeneratePair);
  // A pair found past the coordinate directions: the cross term only.
  const auto y1 = x(3, 0), y2 = x(3, 1), y3 = x(3, 2);
  auto c = pick_direction_pair(y1 * y2 + y3 * y3);
  CHECK_FALSE(c.D.is_zero());
}
