#include "newtonpoly/numeric/envelope.hpp"

#include "newtonpoly/newton.hpp"
#include "newtonpoly/numeric/damping.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace npoly::numeric {

namespace {

using GL = boost::math::quadrature::gauss<double, 15>;

// Fixed rule on [a, b] with breakpoints a + (b - a) 2^{-j}; structure concentrates near a.
template <class F>
double graded(F&& f, double a, double b, int levels) {
  if (b <= a) return 0.0;
  double sum = 0.0;
  double hi = b - a;
  for (int j = 0; j < levels; ++j) {
    const double lo = hi * 0.5;
    sum += GL::integrate(f, a + lo, a + hi);
    hi = lo;
  }
  return sum + GL::integrate(f, a, a + hi);
}

// Root of the nondecreasing g on [0, b] where g crosses 1, if any.
template <class G>
double crossing(G&& g, double b) {
  if (g(b) <= 1.0) return b;
  double lo = 0.0, hi = b;
  for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<int>> multi_indices(std::size_t n, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  for (;;) {
    std::size_t i = 0;
    while (i < n && ++a[i] > max_order) a[i++] = 0;
    if (i == n) break;
    int s = 0;
    for (int v : a) s += v;
    if (s >= 1 && s <= max_order) out.push_back(a);
  }
  return out;
}

}  // namespace

double dyadic_envelope(const std::vector<MultiIndex>& vertices, int M, double lambda, double radius) {
  if (vertices.empty()) throw std::invalid_argument("no vertices");
  if (M <= 0 || !(lambda >= 0) || !(radius > 0)) throw std::invalid_argument("bad envelope parameters");
  const std::size_t n = vertices.front().size();
  const double inv = -1.0 / M;
  // H* depends on |x_i| only and is nondecreasing in each; the kink of min(1, .) sits on
  // lambda H* = 1 and each piece below is split there.
  auto g = [&](double h) { return h <= 1.0 ? 1.0 : std::pow(h, inv); };
  auto piecewise = [&](auto&& f, auto&& lh, double b) {
    const double c = crossing(lh, b);
    return graded(f, 0.0, c, 40) + graded(f, c, b, 40);
  };
  if (n == 1) {
    auto lh = [&](double t) { return lambda * eval_H_star(vertices, std::span<const double>(&t, 1)); };
    return 2.0 * piecewise([&](double t) { return g(lh(t)); }, lh, radius);
  }
  if (n != 2) throw std::invalid_argument("dyadic_envelope supports n <= 2");
  // Polar coordinates on the positive quarter disc; H* grows along every ray and its small
  // values hug the axes, so the angle is graded toward both ends.
  auto ray = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    auto lh = [&](double rho) {
      const double x[2] = {rho * c, rho * s};
      return lambda * eval_H_star(vertices, x);
    };
    return piecewise([&](double rho) { return rho * g(lh(rho)); }, lh, radius);
  };
  const double q = std::numbers::pi / 4;
  return 4.0 * (graded(ray, 0.0, q, 40) + graded([&](double t) { return ray(2 * q - t); }, 0.0, q, 40));
}

DominationRung domination_on_rectangle(const TaylorPoly& H, std::span<const int> k, const DominationOptions& opt) {
  const std::size_t n = H.dim();
  if (k.size() != n) throw DimensionMismatch("rectangle index has wrong dimension");
  if (opt.grid < 1 || opt.subdivisions < 1) throw std::invalid_argument("grid sizes must be positive");
  const auto vertices = build_polyhedron(H).vertices();
  int K = opt.max_order;
  if (K <= 0)
    for (const auto& v : vertices) K = std::max(K, v.total_degree());
  K = std::max(K, 1);

  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    hi[i] = std::ldexp(1.0, -k[i]);
    lo[i] = 0.5 * hi[i];
  }

  DominationRung out;
  out.k.assign(k.begin(), k.end());

  // Pointwise and uniform forms on one midpoint grid.
  const auto alphas = multi_indices(n, K);
  std::vector<TaylorPoly> partials;
  for (const auto& a : alphas) {
    TaylorPoly p = H;
    for (std::size_t i = 0; i < n; ++i)
      if (a[i]) p = p.partial(i, a[i]);
    partials.push_back(std::move(p));
  }
  const int g = opt.grid;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= g;
  std::vector<double> col_min(alphas.size(), std::numeric_limits<double>::infinity());
  double pw = std::numeric_limits<double>::infinity();
  std::vector<double> x(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = lo[i] + (static_cast<double>(r % g) + 0.5) / g * (hi[i] - lo[i]);
      r /= g;
    }
    const double hs = eval_H_star(vertices, x);
    double best = 0.0;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      double mono = 1.0;
      for (std::size_t i = 0; i < n; ++i) mono *= std::pow(x[i], alphas[a][i]);
      const double ratio = std::abs(mono * partials[a].evaluate(std::span<const double>(x))) / hs;
      best = std::max(best, ratio);
      col_min[a] = std::min(col_min[a], ratio);
    }
    pw = std::min(pw, best);
  }
  out.pointwise = pw;
  out.uniform = *std::max_element(col_min.begin(), col_min.end());

  // Directional form. With x = 2^{-k} x', (y.grad')^a f_R(x') is the derivative of H along
  // the direction (y_i 2^{-k_i}), evaluated at x.
  std::vector<std::vector<int>> dirs;
  {
    std::vector<int> y(n, -1);
    for (;;) {
      if (std::any_of(y.begin(), y.end(), [](int v) { return v != 0; })) dirs.push_back(y);
      std::size_t i = 0;
      while (i < n && ++y[i] > 1) y[i++] = -1;
      if (i == n) break;
    }
  }
  std::vector<TaylorPoly> dder;
  for (const auto& y : dirs) {
    RationalVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = Rational(y[i]) / Rational(boost::multiprecision::mpz_int(1) << k[i]);
    TaylorPoly cur = H;
    for (int a = 1; a <= K; ++a) {
      cur = directional_derivative(cur, w, 1);
      dder.push_back(cur);
    }
  }
  const int S = opt.subdivisions;
  std::size_t subs = 1;
  for (std::size_t i = 0; i < n; ++i) subs *= S;
  double dir = std::numeric_limits<double>::infinity();
  std::vector<double> mins(dder.size());
  for (std::size_t s = 0; s < subs; ++s) {
    std::vector<double> slo(n), shi(n);
    std::size_t r = s;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (hi[i] - lo[i]) / S;
      slo[i] = lo[i] + static_cast<double>(r % S) * w;
      shi[i] = slo[i] + w;
      r /= S;
    }
    std::fill(mins.begin(), mins.end(), std::numeric_limits<double>::infinity());
    double star_max = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t q = idx;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = slo[i] + (static_cast<double>(q % g) + 0.5) / g * (shi[i] - slo[i]);
        q /= g;
      }
      star_max = std::max(star_max, eval_H_star(vertices, x));
      for (std::size_t j = 0; j < dder.size(); ++j)
        mins[j] = std::min(mins[j], std::abs(dder[j].evaluate(std::span<const double>(x))));
    }
    dir = std::min(dir, *std::max_element(mins.begin(), mins.end()) / star_max);
  }
  out.directional = dir;
  return out;
}

DominationTable derivative_domination(const TaylorPoly& H, std::span<const int> k0, std::span<const int> step,
                                      const DominationOptions& opt) {
  if (k0.size() != H.dim() || step.size() != H.dim()) throw DimensionMismatch("ladder has wrong dimension");
  if (opt.rungs < 1) throw std::invalid_argument("need at least one rung");
  DominationTable t;
  t.pointwise_inf = t.uniform_inf = t.directional_inf = std::numeric_limits<double>::infinity();
  double pw_max = 0.0;
  std::vector<int> k(k0.begin(), k0.end());
  for (int j = 0; j < opt.rungs; ++j) {
    t.rungs.push_back(domination_on_rectangle(H, k, opt));
    const auto& r = t.rungs.back();
    t.pointwise_inf = std::min(t.pointwise_inf, r.pointwise);
    t.uniform_inf = std::min(t.uniform_inf, r.uniform);
    t.directional_inf = std::min(t.directional_inf, r.directional);
    pw_max = std::max(pw_max, r.pointwise);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] += step[i];
  }
  t.pointwise_spread = pw_max / t.pointwise_inf - 1.0;
  return t;
}

}  // namespace npoly::numeric
