#include "newtonpoly/face_zeros.hpp"

#include "newtonpoly/univariate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace npoly {

std::string to_string(ZeroMethod m) {
  switch (m) {
    case ZeroMethod::exact_univariate: return "exact-univariate";
    case ZeroMethod::numeric_sampled: return "numeric-sampled";
    case ZeroMethod::user_override: return "user-override";
  }
  return "unknown";
}

namespace {

Integer gcd_of(const std::vector<int>& v) {
  Integer g = 0;
  for (int x : v) g = boost::multiprecision::gcd(g, Integer(std::abs(x)));
  return g;
}

// Faces of dimension one: f_F = x^{v0} G(x^delta), delta primitive. A zero of f_F at y in
// (R - {0})^n has the order of the root s = y^delta of G, because s(x) = x^delta is a
// submersion there. Negative s is reachable iff some delta_i is odd.
FaceZero edge_zero_order(const TaylorPoly& f_F, const FaceRecord& F) {
  const std::size_t n = f_F.dim();
  const MultiIndex& v0 = F.vertices.front();
  const MultiIndex& v1 = F.vertices.back();
  std::vector<int> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = v1[i] - v0[i];
  const int steps = static_cast<int>(gcd_of(diff));
  std::vector<int> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = diff[i] / steps;

  std::vector<Rational> g(static_cast<std::size_t>(steps) + 1, 0);
  for (const auto& [a, c] : f_F.terms()) {
    int j = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (delta[i] == 0) {
        if (a[i] != v0[i]) throw std::logic_error("edge term off the edge line");
        continue;
      }
      const int num = a[i] - v0[i];
      if (num % delta[i] != 0) throw std::logic_error("edge term off the lattice line");
      const int jj = num / delta[i];
      if (j >= 0 && jj != j) throw std::logic_error("edge term off the edge line");
      j = jj;
    }
    g.at(static_cast<std::size_t>(j)) += c;
  }
  const UPoly G(std::move(g));
  const bool negative_ok = std::any_of(delta.begin(), delta.end(), [](int d) { return d % 2 != 0; });

  FaceZero out;
  out.face = F;
  out.method = ZeroMethod::exact_univariate;
  const auto factors = squarefree_decomposition(G);
  for (std::size_t i = factors.size(); i-- > 0;) {
    const auto roots = isolate_nonzero_real_roots(factors[i]);
    for (double s : roots) {
      if (s < 0 && !negative_ok) continue;
      out.order = static_cast<int>(i) + 1;
      // Witness: all coordinates 1 except one carrying the root.
      std::vector<double> y(n, 1.0);
      std::size_t carrier = n;
      for (std::size_t k = 0; k < n; ++k)
        if (delta[k] != 0 && (s > 0 || delta[k] % 2 != 0)) {
          carrier = k;
          break;
        }
      const double mag = std::pow(std::abs(s), 1.0 / delta[carrier]);
      y[carrier] = (s < 0) ? -mag : mag;
      out.witness = std::move(y);
      return out;
    }
  }
  return out;
}

std::vector<MultiIndex> multi_indices_of_order(std::size_t n, int order) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      out.emplace_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, order);
  return out;
}

TaylorPoly apply_partial(const TaylorPoly& f, const MultiIndex& beta) {
  TaylorPoly g = f;
  for (std::size_t i = 0; i < beta.size(); ++i)
    if (beta[i]) g = g.partial(i, static_cast<unsigned>(beta[i]));
  return g;
}

double coefficient_scale(const TaylorPoly& p) {
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += std::abs(to_double(c));
  return s > 0 ? s : 1.0;
}

// Looks for a common zero in (R - {0})^n of all partials of order < r.
std::optional<std::vector<double>> find_common_zero(const TaylorPoly& f, const FaceRecord& F, int r,
                                                    const NumericZeroOptions& opt) {
  const std::size_t n = f.dim();
  std::vector<TaylorPoly> eqs;
  for (int o = 0; o < r; ++o)
    for (const auto& beta : multi_indices_of_order(n, o)) {
      TaylorPoly p = apply_partial(f, beta);
      if (!p.is_zero()) eqs.push_back(std::move(p));
    }
  if (eqs.empty()) return std::nullopt;
  std::vector<double> scale;
  std::vector<std::vector<TaylorPoly>> grads(eqs.size());
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    scale.push_back(coefficient_scale(eqs[k]));
    for (std::size_t i = 0; i < n; ++i) grads[k].push_back(eqs[k].partial(i));
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = to_double(F.weight[i]);
  // Quasi-homogeneous normalisation: max_i |x_i|^{1/w_i} = 1.
  auto normalise = [&](std::vector<double>& x) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t = std::max(t, std::pow(std::abs(x[i]), 1.0 / w[i]));
    if (t <= 0) return;
    for (std::size_t i = 0; i < n; ++i) x[i] /= std::pow(t, w[i]);
  };
  auto residual = [&](const std::vector<double>& x, Eigen::VectorXd& F_out) {
    F_out.resize(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t k = 0; k < eqs.size(); ++k)
      F_out[static_cast<Eigen::Index>(k)] = eqs[k].evaluate(std::span<const double>(x)) / scale[k];
  };

  std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(r));
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  std::bernoulli_distribution flip(0.5);
  for (int start = 0; start < opt.starts; ++start) {
    std::vector<double> x(n);
    for (auto& v : x) v = flip(rng) ? -mag(rng) : mag(rng);
    normalise(x);
    double mu = 1e-3;
    Eigen::VectorXd Fx;
    residual(x, Fx);
    double cost = Fx.squaredNorm();
    for (int it = 0; it < 200 && cost > 1e-30; ++it) {
      Eigen::MatrixXd J(static_cast<Eigen::Index>(eqs.size()), static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < eqs.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
          J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
              grads[k][i].evaluate(std::span<const double>(x)) / scale[k];
      Eigen::MatrixXd A = J.transpose() * J;
      A.diagonal().array() += mu * (1.0 + A.diagonal().array());
      Eigen::VectorXd step = A.ldlt().solve(-J.transpose() * Fx);
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step[static_cast<Eigen::Index>(i)];
      normalise(trial);
      Eigen::VectorXd Ft;
      residual(trial, Ft);
      const double tc = Ft.squaredNorm();
      if (tc < cost) {
        x = std::move(trial);
        Fx = std::move(Ft);
        cost = tc;
        mu = std::max(mu / 3.0, 1e-12);
      } else {
        mu *= 4.0;
        if (mu > 1e8) break;
      }
    }
    const double worst = Fx.size() ? Fx.cwiseAbs().maxCoeff() : 0.0;
    const double smallest = std::abs(*std::min_element(x.begin(), x.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    }));
    if (worst < opt.residual_tol && smallest > 1e-4) return x;
  }
  return std::nullopt;
}

}  // namespace

FaceZero zero_order_on_face(const TaylorPoly& f_F, const FaceRecord& F, const NumericZeroOptions& opt) {
  if (F.dim == 0 || f_F.term_count() <= 1) {
    FaceZero out;
    out.face = F;
    return out;  // a monomial never vanishes off the coordinate hyperplanes
  }
  if (F.dim == 1) return edge_zero_order(f_F, F);

  FaceZero out;
  out.face = F;
  out.method = ZeroMethod::numeric_sampled;
  for (int r = 1; r <= f_F.degree(); ++r) {
    auto z = find_common_zero(f_F, F, r, opt);
    if (!z) break;
    out.order = r;
    out.witness = std::move(z);
  }
  return out;
}

ZeroOrderReport zero_orders(const TaylorPoly& H, const NewtonPolyhedron& N,
                            const std::optional<MOverride>& override_m, const NumericZeroOptions& opt) {
  ZeroOrderReport rep;
  for (const auto& F : N.compact_faces()) {
    auto fz = zero_order_on_face(face_restrict(H, F), F, opt);
    rep.m = std::max(rep.m, fz.order);
    if (fz.method == ZeroMethod::numeric_sampled) rep.method = ZeroMethod::numeric_sampled;
    rep.faces.push_back(std::move(fz));
  }
  if (override_m) {
    rep.override_m = override_m;
    rep.m = override_m->m;
    rep.method = ZeroMethod::user_override;
  }
  rep.M = std::max(2, rep.m);
  rep.b = H.order_at_origin();
  return rep;
}

bool second_partial_nonvanishing(const TaylorPoly& f_F, std::span<const Rational> y) {
  for (std::size_t i = 0; i < f_F.dim(); ++i)
    for (std::size_t j = i; j < f_F.dim(); ++j)
      if (f_F.partial(i).partial(j).evaluate(y) != 0) return true;
  return false;
}

std::optional<StructuralFace> extract_power_of_linear_form(const TaylorPoly& f) {
  if (f.is_zero()) return std::nullopt;
  const std::size_t n = f.dim();
  const int m = f.degree();
  if (m < 1 || f.order_at_origin() != m) return std::nullopt;  // must be homogeneous of degree m

  // Leading variable: the first x_i whose pure power x_i^m appears.
  std::optional<std::size_t> lead;
  for (std::size_t i = 0; i < n && !lead; ++i)
    if (f.coefficient(MultiIndex::unit(n, i, m)) != 0) lead = i;
  if (!lead) return std::nullopt;

  StructuralFace s;
  s.m = m;
  s.c = f.coefficient(MultiIndex::unit(n, *lead, m));
  s.beta.assign(n, 0);
  s.beta[*lead] = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == *lead) continue;
    if (m == 1) {
      s.beta[j] = f.coefficient(MultiIndex::unit(n, j)) / s.c;
    } else {
      MultiIndex a = MultiIndex::unit(n, *lead, m - 1) + MultiIndex::unit(n, j, 1);
      s.beta[j] = f.coefficient(a) / (s.c * m);
    }
  }
  TaylorPoly L(n);
  for (std::size_t j = 0; j < n; ++j) L.add_term(MultiIndex::unit(n, j), s.beta[j]);
  if (!(L.pow(static_cast<unsigned>(m)) * s.c == f)) return std::nullopt;
  // Normalise beta so its first nonzero entry is 1.
  for (std::size_t j = 0; j < n; ++j)
    if (s.beta[j] != 0) {
      if (j < *lead) {
        const Rational b = s.beta[j];
        for (auto& v : s.beta) v /= b;
        for (int k = 0; k < m; ++k) s.c *= b;
      }
      break;
    }
  return s;
}

DegeneracyReport hessian_condition(const TaylorPoly& H) {
  const std::size_t n = H.dim();
  std::vector<std::vector<TaylorPoly>> hess(n, std::vector<TaylorPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hess[i][j] = H.partial(i).partial(j);

  DegeneracyReport rep;
  for (std::size_t i = 0; i < n && !rep.hessian_condition_holds; ++i)
    for (std::size_t j = i + 1; j < n && !rep.hessian_condition_holds; ++j)
      for (std::size_t k = 0; k < n && !rep.hessian_condition_holds; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          TaylorPoly minor = hess[i][k] * hess[j][l] - hess[i][l] * hess[j][k];
          if (!minor.is_zero()) {
            rep.hessian_condition_holds = true;
            break;
          }
        }

  if (H.is_zero()) return rep;
  const auto N = build_polyhedron(H);
  if (N.vertices().size() == 1) {
    const auto& v = N.vertices().front();
    int nonzero = 0;
    for (std::size_t i = 0; i < n; ++i) nonzero += v[i] != 0;
    rep.axis_vertex_only = nonzero == 1;
  }
  if (rep.hessian_condition_holds) return rep;

  std::vector<StructuralFace> faces;
  std::optional<int> common;
  bool all_ok = true;
  for (const auto& F : N.compact_faces()) {
    auto s = extract_power_of_linear_form(face_restrict(H, F));
    if (!s) {
      all_ok = false;
      break;
    }
    s->face = F;
    if (!common)
      common = s->m;
    else if (*common != s->m)
      common = -1;
    faces.push_back(std::move(*s));
  }
  if (all_ok) {
    rep.structural_form = std::move(faces);
    if (common && *common > 0) rep.common_m = common;
  }
  return rep;
}

TaylorPoly hessian_determinant(const TaylorPoly& H, std::span<const Rational> u, std::span<const Rational> v) {
  const TaylorPoly huu = second_directional(H, u, u);
  const TaylorPoly hvv = second_directional(H, v, v);
  const TaylorPoly huv = second_directional(H, u, v);
  return huu * hvv - huv * huv;
}

DirectionPair pick_direction_pair(const TaylorPoly& H) {
  const std::size_t n = H.dim();
  if (!hessian_condition(H).hessian_condition_holds) throw NoNondegeneratePair();

  auto unit = [n](std::size_t i) {
    RationalVector e(n, 0);
    e[i] = 1;
    return e;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto u = unit(i), v = unit(j);
      TaylorPoly D = hessian_determinant(H, u, v);
      if (!D.is_zero()) return {std::move(u), std::move(v), std::move(D)};
    }

  std::vector<RationalVector> lattice;
  std::vector<int> cur(n, -2);
  for (;;) {
    if (std::any_of(cur.begin(), cur.end(), [](int x) { return x != 0; })) {
      RationalVector w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = cur[i];
      lattice.push_back(std::move(w));
    }
    std::size_t i = 0;
    while (i < n && cur[i] == 2) cur[i++] = -2;
    if (i == n) break;
    ++cur[i];
  }
  for (std::size_t a = 0; a < lattice.size(); ++a)
    for (std::size_t b = a + 1; b < lattice.size(); ++b) {
      TaylorPoly D = hessian_determinant(H, lattice[a], lattice[b]);
      if (!D.is_zero()) return {lattice[a], lattice[b], std::move(D)};
    }
  throw NoNondegeneratePair();
}

}  // namespace npoly
