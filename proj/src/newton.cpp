#include "newtonpoly/newton.hpp"

#include "newtonpoly/lp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace npoly {

namespace {

RationalVector to_rational(const MultiIndex& a) {
  RationalVector v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i];
  return v;
}

Rational dot(std::span<const Rational> c, const MultiIndex& a) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) s += c[i] * a[i];
  return s;
}

Rational dot(std::span<const Rational> c, std::span<const Rational> x) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
  return s;
}

// Scales a nonzero rational vector to primitive integers, keeping sign.
RationalVector make_primitive(RationalVector c) {
  Integer l = 1;
  for (const auto& v : c) l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(v)));
  Integer g = 0;
  for (auto& v : c) {
    v *= l;
    g = boost::multiprecision::gcd(g, Integer(boost::multiprecision::numerator(v)));
  }
  if (g != 0)
    for (auto& v : c) v /= g;
  return c;
}

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(std::as_const(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RationalVector>& rows, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const Rational piv = rows[r][col];
    for (auto& v : rows[r]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace

std::size_t rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows.front().size();
  return rref(rows, n).size();
}

std::vector<RationalVector> nullspace(std::vector<RationalVector> rows, std::size_t n) {
  const auto pivots = rref(rows, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

NewtonPolyhedron NewtonPolyhedron::from_generators(std::size_t n, std::vector<MultiIndex> generators) {
  if (generators.empty()) throw EmptyNewtonPolyhedron();
  for (const auto& g : generators)
    if (g.size() != n) throw DimensionMismatch("generator dimension mismatch");
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

  NewtonPolyhedron N;
  N.n_ = n;
  N.generators_ = std::move(generators);
  N.compute_vertices();
  N.compute_facets();
  N.compute_faces();
  return N;
}

void NewtonPolyhedron::compute_vertices() {
  // Cheap pass: anything dominating another generator is absorbed.
  std::vector<MultiIndex> candidates;
  for (const auto& a : generators_) {
    bool dominated = false;
    for (const auto& b : generators_)
      if (b != a && b.divides(a)) {
        dominated = true;
        break;
      }
    if (!dominated) candidates.push_back(a);
  }

  // LP pass: alpha is absorbed iff some convex combination of the others is <= alpha.
  vertices_.clear();
  for (const auto& a : candidates) {
    std::vector<const MultiIndex*> others;
    for (const auto& b : candidates)
      if (b != a) others.push_back(&b);
    if (others.empty()) {
      vertices_.push_back(a);
      continue;
    }
    const std::size_t k = others.size();
    lp::Problem p;
    p.c.assign(k + n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      RationalVector row(k + n_, 0);
      for (std::size_t j = 0; j < k; ++j) row[j] = (*others[j])[i];
      row[k + i] = 1;
      p.A.push_back(std::move(row));
      p.b.push_back(a[i]);
    }
    RationalVector sum_row(k + n_, 0);
    for (std::size_t j = 0; j < k; ++j) sum_row[j] = 1;
    p.A.push_back(std::move(sum_row));
    p.b.push_back(1);
    if (!lp::feasible(p)) vertices_.push_back(a);
  }
}

void NewtonPolyhedron::compute_facets() {
  const std::size_t nv = vertices_.size();
  std::set<RationalVector> seen;
  std::vector<RationalVector> points;
  for (const auto& v : vertices_) points.push_back(to_rational(v));

  for (std::size_t s = 1; s <= std::min(n_, nv); ++s) {
    for_each_subset(nv, s, [&](const std::vector<std::size_t>& S) {
      for_each_subset(n_, n_ - s, [&](const std::vector<std::size_t>& T) {
        std::vector<RationalVector> rows;
        for (std::size_t j = 1; j < S.size(); ++j) {
          RationalVector diff(n_);
          for (std::size_t i = 0; i < n_; ++i) diff[i] = points[S[j]][i] - points[S[0]][i];
          rows.push_back(std::move(diff));
        }
        for (std::size_t axis : T) {
          RationalVector e(n_, 0);
          e[axis] = 1;
          rows.push_back(std::move(e));
        }
        auto ns = nullspace(rows, n_);
        if (ns.size() != 1) return;
        RationalVector c = ns[0];
        bool has_pos = false, has_neg = false;
        for (const auto& v : c) {
          if (v > 0) has_pos = true;
          if (v < 0) has_neg = true;
        }
        if (has_pos && has_neg) return;
        if (has_neg)
          for (auto& v : c) v = -v;
        c = make_primitive(std::move(c));
        if (seen.count(c)) return;
        const Rational a = dot(c, points[S[0]]);
        for (const auto& p : points)
          if (dot(c, p) < a) return;
        seen.insert(c);
        facets_.push_back(Facet{std::move(c), a});
      });
    });
  }
  std::sort(facets_.begin(), facets_.end(), [](const Facet& x, const Facet& y) { return x.normal < y.normal; });
}

FaceRecord NewtonPolyhedron::face_from_tight_facets(const std::vector<std::size_t>& tight) const {
  FaceRecord F;
  F.weight.assign(n_, 0);
  for (std::size_t t : tight)
    for (std::size_t i = 0; i < n_; ++i) F.weight[i] += facets_[t].normal[i];

  for (const auto& v : vertices_) {
    bool on = true;
    for (std::size_t t : tight)
      if (dot(facets_[t].normal, v) != facets_[t].offset) {
        on = false;
        break;
      }
    if (on) F.vertices.push_back(v);
  }
  for (std::size_t i = 0; i < n_; ++i)
    if (F.weight[i] == 0) F.recession.push_back(i);
  F.compact = F.recession.empty();
  F.degree = F.vertices.empty() ? Rational(0) : dot(F.weight, F.vertices.front());

  std::vector<RationalVector> span;
  for (std::size_t j = 1; j < F.vertices.size(); ++j) {
    RationalVector diff(n_);
    for (std::size_t i = 0; i < n_; ++i) diff[i] = F.vertices[j][i] - F.vertices[0][i];
    span.push_back(std::move(diff));
  }
  for (std::size_t axis : F.recession) {
    RationalVector e(n_, 0);
    e[axis] = 1;
    span.push_back(std::move(e));
  }
  F.dim = static_cast<int>(rank(std::move(span)));
  return F;
}

void NewtonPolyhedron::compute_faces() {
  // A face is identified by the set of facets containing it; grow by intersecting with facets.
  const std::size_t nf = facets_.size();
  auto vertex_set = [&](const std::vector<std::size_t>& tight) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
      bool on = true;
      for (std::size_t t : tight)
        if (dot(facets_[t].normal, vertices_[j]) != facets_[t].offset) {
          on = false;
          break;
        }
      if (on) out.push_back(j);
    }
    return out;
  };
  // Closure: all facets containing the given vertex set and recession directions.
  auto closure = [&](const std::vector<std::size_t>& verts, const std::vector<bool>& rec) {
    std::vector<std::size_t> tight;
    for (std::size_t t = 0; t < nf; ++t) {
      bool contains = true;
      for (std::size_t j : verts)
        if (dot(facets_[t].normal, vertices_[j]) != facets_[t].offset) {
          contains = false;
          break;
        }
      for (std::size_t i = 0; contains && i < n_; ++i)
        if (rec[i] && facets_[t].normal[i] != 0) contains = false;
      if (contains) tight.push_back(t);
    }
    return tight;
  };
  auto recession_of = [&](const std::vector<std::size_t>& tight) {
    std::vector<bool> rec(n_, true);
    for (std::size_t t : tight)
      for (std::size_t i = 0; i < n_; ++i)
        if (facets_[t].normal[i] != 0) rec[i] = false;
    return rec;
  };

  std::set<std::vector<std::size_t>> seen;
  std::deque<std::vector<std::size_t>> queue;
  for (std::size_t t = 0; t < nf; ++t) {
    std::vector<std::size_t> tight{t};
    tight = closure(vertex_set(tight), recession_of(tight));
    if (seen.insert(tight).second) queue.push_back(tight);
  }
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < nf; ++t) {
      if (std::binary_search(cur.begin(), cur.end(), t)) continue;
      auto next = cur;
      next.insert(std::upper_bound(next.begin(), next.end(), t), t);
      auto verts = vertex_set(next);
      if (verts.empty()) continue;
      next = closure(verts, recession_of(next));
      if (seen.insert(next).second) queue.push_back(next);
    }
  }

  faces_.clear();
  for (const auto& tight : seen) faces_.push_back(face_from_tight_facets(tight));
  std::sort(faces_.begin(), faces_.end(), [](const FaceRecord& a, const FaceRecord& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.vertices != b.vertices) return a.vertices < b.vertices;
    return a.recession < b.recession;
  });
}

bool NewtonPolyhedron::contains(std::span<const Rational> x) const {
  if (x.size() != n_) throw DimensionMismatch("point dimension mismatch");
  for (const auto& f : facets_)
    if (dot(f.normal, x) < f.offset) return false;
  return true;
}

bool NewtonPolyhedron::contains_by_lp(std::span<const Rational> x) const {
  if (x.size() != n_) throw DimensionMismatch("point dimension mismatch");
  const std::size_t k = vertices_.size();
  lp::Problem p;
  p.c.assign(k + n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    RationalVector row(k + n_, 0);
    for (std::size_t j = 0; j < k; ++j) row[j] = vertices_[j][i];
    row[k + i] = 1;
    p.A.push_back(std::move(row));
    p.b.push_back(x[i]);
  }
  RationalVector sum_row(k + n_, 0);
  for (std::size_t j = 0; j < k; ++j) sum_row[j] = 1;
  p.A.push_back(std::move(sum_row));
  p.b.push_back(1);
  return lp::feasible(p);
}

std::vector<FaceRecord> NewtonPolyhedron::compact_faces() const {
  std::vector<FaceRecord> out;
  for (const auto& F : faces_)
    if (F.compact) out.push_back(F);
  return out;
}

FaceRecord NewtonPolyhedron::face_containing(std::span<const Rational> x) const {
  if (!contains(x)) throw std::invalid_argument("face_containing: point is not in the polyhedron");
  std::vector<std::size_t> tight;
  for (std::size_t t = 0; t < facets_.size(); ++t)
    if (dot(facets_[t].normal, x) == facets_[t].offset) tight.push_back(t);
  if (tight.empty()) throw std::invalid_argument("face_containing: point is interior");
  return face_from_tight_facets(tight);
}

NewtonPolyhedron build_polyhedron(const TaylorPoly& f) {
  std::vector<MultiIndex> gens;
  for (const auto& [a, c] : f.terms()) gens.push_back(a);
  return NewtonPolyhedron::from_generators(f.dim(), std::move(gens));
}

NewtonDistance newton_distance(const NewtonPolyhedron& N) {
  const std::size_t n = N.dim();
  const auto& V = N.vertices();
  const std::size_t k = V.size();

  // variables: lambda (k), t, slack (n);  sum_j lambda_j v_ji + s_i - t = 0,  sum lambda = 1
  lp::Problem p;
  const std::size_t nvar = k + 1 + n;
  p.c.assign(nvar, 0);
  p.c[k] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector row(nvar, 0);
    for (std::size_t j = 0; j < k; ++j) row[j] = V[j][i];
    row[k] = -1;
    row[k + 1 + i] = 1;
    p.A.push_back(std::move(row));
    p.b.push_back(0);
  }
  RationalVector sum_row(nvar, 0);
  for (std::size_t j = 0; j < k; ++j) sum_row[j] = 1;
  p.A.push_back(std::move(sum_row));
  p.b.push_back(1);

  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::optimal) throw std::logic_error("newton_distance: LP did not reach an optimum");

  Rational by_facets = 0;
  for (const auto& f : N.facets()) {
    Rational s = 0;
    for (const auto& c : f.normal) s += c;
    by_facets = std::max(by_facets, Rational(f.offset / s));
  }
  if (by_facets != sol.value) throw std::logic_error("newton_distance: LP and facet routes disagree");

  NewtonDistance out;
  out.d = sol.value;
  out.witness.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

BisectrixFace bisectrix_face(const NewtonPolyhedron& N, const NewtonDistance& d) {
  RationalVector diag(N.dim(), d.d);
  BisectrixFace out;
  out.face = N.face_containing(diag);
  out.k = out.face.dim;
  return out;
}

TaylorPoly face_restrict(const TaylorPoly& f, std::span<const Rational> weight, const Rational& degree) {
  return f.filter([&](const MultiIndex& a) { return dot(weight, a) == degree; });
}

TaylorPoly face_restrict(const TaylorPoly& f, const FaceRecord& F) {
  return face_restrict(f, F.weight, F.degree);
}

FaceRecord dilate_face(const FaceRecord& F, int r) {
  FaceRecord out = F;
  for (auto& v : out.vertices) v = v.scaled(r);
  out.degree *= r;
  return out;
}

bool scaled_polyhedron_equal(const NewtonPolyhedron& A, const NewtonPolyhedron& B, const Rational& r) {
  if (r <= 0) throw std::invalid_argument("scaled_polyhedron_equal: dilation factor must be positive");
  if (A.dim() != B.dim()) throw DimensionMismatch("scaled_polyhedron_equal: dimension mismatch");

  std::vector<RationalVector> va, vb;
  for (const auto& v : A.vertices()) {
    RationalVector s = to_rational(v);
    for (auto& x : s) x *= r;
    va.push_back(std::move(s));
  }
  for (const auto& v : B.vertices()) vb.push_back(to_rational(v));
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  if (va != vb) return false;

  if (A.facets().size() != B.facets().size()) return false;
  for (std::size_t i = 0; i < A.facets().size(); ++i) {
    const auto& fa = A.facets()[i];
    const auto& fb = B.facets()[i];
    if (fa.normal != fb.normal || fa.offset * r != fb.offset) return false;
  }
  return true;
}

}  // namespace npoly
