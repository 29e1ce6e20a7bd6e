#pragma once

// Exact Newton polyhedra N(f) = conv(alpha + R^n_{>=0} : f_alpha != 0).
//
// Stored as the vertex set plus the implicit recession cone R^n_{>=0}; the
// facet system {x : c.x >= a} is derived by exact enumeration of candidate
// supporting hyperplanes through vertices and coordinate directions. All
// normals c are nonnegative primitive integer vectors.

#include "newtonpoly/rational.hpp"
#include "newtonpoly/taylor.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace npoly {

class EmptyNewtonPolyhedron : public std::invalid_argument {
 public:
  EmptyNewtonPolyhedron() : std::invalid_argument("Newton polyhedron of the zero polynomial is empty") {}
};

using RationalVector = std::vector<Rational>;

struct Facet {
  RationalVector normal;  // c >= 0, primitive integer entries
  Rational offset;        // a = min over N(f) of c.x
};

/// One face F of N(f), compact or not.
struct FaceRecord {
  std::vector<MultiIndex> vertices;  // sorted
  std::vector<std::size_t> recession;  // coordinate axes e_i contained in rec(F)
  int dim = 0;
  bool compact = true;
  RationalVector weight;  // supporting weight c; all entries > 0 iff compact
  Rational degree;        // a = c.v for every vertex v of F

  bool operator==(const FaceRecord&) const = default;
};

class NewtonPolyhedron {
 public:
  /// Throws EmptyNewtonPolyhedron when there are no generators.
  static NewtonPolyhedron from_generators(std::size_t n, std::vector<MultiIndex> generators);

  std::size_t dim() const { return n_; }
  const std::vector<MultiIndex>& generators() const { return generators_; }
  const std::vector<MultiIndex>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }

  /// Exact membership via the facet system.
  bool contains(std::span<const Rational> x) const;
  /// Exact membership via LP over the vertex description; independent of the facets.
  bool contains_by_lp(std::span<const Rational> x) const;

  /// Every proper face (dimensions 0..n-1), in canonical order.
  const std::vector<FaceRecord>& faces() const { return faces_; }
  std::vector<FaceRecord> compact_faces() const;

  /// The unique face containing x in its relative interior; x must lie in N.
  FaceRecord face_containing(std::span<const Rational> x) const;

 private:
  void compute_vertices();
  void compute_facets();
  void compute_faces();
  FaceRecord face_from_tight_facets(const std::vector<std::size_t>& tight) const;

  std::size_t n_ = 0;
  std::vector<MultiIndex> generators_;
  std::vector<MultiIndex> vertices_;
  std::vector<Facet> facets_;
  std::vector<FaceRecord> faces_;
};

NewtonPolyhedron build_polyhedron(const TaylorPoly& f);

struct NewtonDistance {
  Rational d;
  /// Convex weights over N.vertices() with sum_i lambda_i v_i <= (d,...,d).
  RationalVector witness;
};

/// Exact LP value, cross-checked against max over facets of a / sum(c).
NewtonDistance newton_distance(const NewtonPolyhedron& N);

struct BisectrixFace {
  FaceRecord face;
  int k = 0;
};

BisectrixFace bisectrix_face(const NewtonPolyhedron& N, const NewtonDistance& d);

/// f_F: the terms of f whose exponent lies on the face (c.alpha == a).
TaylorPoly face_restrict(const TaylorPoly& f, const FaceRecord& F);
TaylorPoly face_restrict(const TaylorPoly& f, std::span<const Rational> weight, const Rational& degree);

/// The face r*F of r*N(f): same supporting weight, degree scaled by r.
FaceRecord dilate_face(const FaceRecord& F, int r);

/// True iff B = r * A (vertex sets and facet systems both compared). Throws for r <= 0.
bool scaled_polyhedron_equal(const NewtonPolyhedron& A, const NewtonPolyhedron& B, const Rational& r);

/// Rank of a set of rational vectors.
std::size_t rank(std::vector<RationalVector> rows);

/// Basis of {c : rows * c = 0}.
std::vector<RationalVector> nullspace(std::vector<RationalVector> rows, std::size_t n);

}  // namespace npoly
