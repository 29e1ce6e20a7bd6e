#pragma once

// Dense univariate polynomials over Q, just enough for exact root multiplicities:
// gcd, Yun square-free decomposition and Sturm real-root counting.

#include "newtonpoly/rational.hpp"

#include <utility>
#include <vector>

namespace npoly {

class UPoly {
 public:
  UPoly() = default;
  /// Coefficients from the constant term upward.
  explicit UPoly(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& lead() const { return c_.back(); }
  Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  UPoly derivative() const;
  UPoly monic() const;
  Rational evaluate(const Rational& x) const;
  int sign_at_pos_infinity() const;
  int sign_at_neg_infinity() const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  bool operator==(const UPoly& o) const { return c_ == o.c_; }

  /// (quotient, remainder)
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const;

 private:
  void trim();
  std::vector<Rational> c_;
};

UPoly gcd(UPoly a, UPoly b);

/// Yun's algorithm: returns a_1, a_2, ... with p = lc * prod a_i^i, each a_i monic square-free.
std::vector<UPoly> squarefree_decomposition(const UPoly& p);

/// Distinct real roots of p in the open intervals (-inf, 0) and (0, inf).
struct SignedRootCount {
  int negative = 0;
  int positive = 0;
};
SignedRootCount count_nonzero_real_roots(const UPoly& p);

/// Largest multiplicity of a nonzero real root (0 if none). If allow_negative is false only
/// positive roots are considered.
int max_nonzero_root_multiplicity(const UPoly& p, bool allow_negative = true);

/// Numeric approximations of the distinct nonzero real roots of a square-free p, ascending.
std::vector<double> isolate_nonzero_real_roots(const UPoly& squarefree);

}  // namespace npoly
