#pragma once

// Orders of zeros of face polynomials on (R - {0})^n, Hessian degeneracy and
// direction pairs for the damping determinant.

#include "newtonpoly/newton.hpp"
#include "newtonpoly/taylor.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npoly {

enum class ZeroMethod { exact_univariate, numeric_sampled, user_override };

std::string to_string(ZeroMethod m);

struct FaceZero {
  FaceRecord face;
  int order = 0;
  std::optional<std::vector<double>> witness;  // a zero of that order, when order >= 1
  ZeroMethod method = ZeroMethod::exact_univariate;
};

struct NumericZeroOptions {
  int starts = 64;
  std::uint64_t seed = 42;
  double residual_tol = 1e-9;
};

/// Maximal order of a zero of f_F on (R - {0})^n. Exact for faces of dimension <= 1
/// (any n); numeric sampling with Gauss-Newton refinement otherwise.
FaceZero zero_order_on_face(const TaylorPoly& f_F, const FaceRecord& F, const NumericZeroOptions& opt = {});

struct MOverride {
  int m = 0;
  std::string justification;
};

struct ZeroOrderReport {
  std::vector<FaceZero> faces;
  int m = 0;
  int M = 2;
  int b = 0;
  ZeroMethod method = ZeroMethod::exact_univariate;  // weakest method among faces
  std::optional<MOverride> override_m;
};

ZeroOrderReport zero_orders(const TaylorPoly& H, const NewtonPolyhedron& N,
                            const std::optional<MOverride>& override_m = std::nullopt,
                            const NumericZeroOptions& opt = {});

/// True iff some second partial of f_F is nonzero at y.
bool second_partial_nonvanishing(const TaylorPoly& f_F, std::span<const Rational> y);

struct StructuralFace {
  FaceRecord face;
  Rational c;
  RationalVector beta;  // first nonzero entry normalised to 1
  int m = 0;
};

struct DegeneracyReport {
  bool hessian_condition_holds = false;
  bool axis_vertex_only = false;
  /// Present when the condition fails and every compact face polynomial is c_F (beta . x)^m.
  std::optional<std::vector<StructuralFace>> structural_form;
  std::optional<int> common_m;
};

/// Exact 2x2 minors of the Hessian; the condition holds iff one is not identically zero.
DegeneracyReport hessian_condition(const TaylorPoly& H);

/// Writes f as c (beta . x)^m when it has that form.
std::optional<StructuralFace> extract_power_of_linear_form(const TaylorPoly& f);

class NoNondegeneratePair : public std::runtime_error {
 public:
  NoNondegeneratePair() : std::runtime_error("no direction pair with a nonvanishing Hessian determinant") {}
};

struct DirectionPair {
  RationalVector u, v;
  TaylorPoly D;  // d_uu H * d_vv H - (d_uv H)^2
};

/// Coordinate pairs first, then pairs of vectors from {-2..2}^n in a fixed order.
DirectionPair pick_direction_pair(const TaylorPoly& H);

TaylorPoly hessian_determinant(const TaylorPoly& H, std::span<const Rational> u, std::span<const Rational> v);

}  // namespace npoly
