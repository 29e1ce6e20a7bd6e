#pragma once

// Exact sparse multivariate polynomials over Q.
//
// A TaylorPoly is the finite (truncated) Taylor expansion of a graph function
// at a point. Terms are keyed by exponent; zero coefficients are never stored.

#include "newtonpoly/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace npoly {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lattice exponent alpha in N^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : e_(n, 0) {}
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex unit(std::size_t n, std::size_t i, int power = 1);

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  int total_degree() const;
  const std::vector<int>& entries() const { return e_; }

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex scaled(int r) const;
  /// Componentwise a <= b.
  bool divides(const MultiIndex& o) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> e_;
};

std::string to_string(const MultiIndex& a);

class TaylorPoly {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  TaylorPoly() = default;
  explicit TaylorPoly(std::size_t n) : n_(n) {}

  static TaylorPoly constant(std::size_t n, const Rational& c);
  static TaylorPoly monomial(const MultiIndex& a, const Rational& c = 1);
  /// The coordinate function x_i (0-based).
  static TaylorPoly variable(std::size_t n, std::size_t i);

  std::size_t dim() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const MultiIndex& a) const;
  /// Adds c * x^a, dropping the term if the sum cancels.
  void add_term(const MultiIndex& a, const Rational& c);

  /// Largest total degree present (the truncation degree of the input); 0 for the zero polynomial.
  int degree() const;
  /// Smallest total degree present; the order of vanishing at the origin.
  int order_at_origin() const;
  int degree_in(std::size_t i) const;

  TaylorPoly operator+(const TaylorPoly& o) const;
  TaylorPoly operator-(const TaylorPoly& o) const;
  TaylorPoly operator-() const;
  TaylorPoly operator*(const TaylorPoly& o) const;
  TaylorPoly operator*(const Rational& c) const;
  TaylorPoly pow(unsigned r) const;
  bool operator==(const TaylorPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  /// Exact r-th derivative in x_i (0-based).
  TaylorPoly partial(std::size_t i, unsigned r = 1) const;
  /// Sum over terms with exponent satisfying the predicate.
  template <class Pred>
  TaylorPoly filter(Pred&& keep) const {
    TaylorPoly out(n_);
    for (const auto& [a, c] : terms_)
      if (keep(a)) out.terms_.emplace_hint(out.terms_.end(), a, c);
    return out;
  }

  /// Substitutes x_i -> images[i]; images share a common target dimension.
  TaylorPoly compose(std::span<const TaylorPoly> images) const;
  /// Permutes variables: result has x_{perm[i]} wherever this has x_i.
  TaylorPoly permuted(std::span<const std::size_t> perm) const;

 private:
  std::size_t n_ = 0;
  TermMap terms_;
};

std::string to_string(const TaylorPoly& p);

/// Base point z at which the graph function is recentred.
struct BasePoint {
  std::vector<Rational> z;
};

/// H(x) = g(x + z) - g(z) - grad g(z) . x, checked to vanish to second order at 0.
TaylorPoly build_H(const TaylorPoly& g, const BasePoint& z);

/// (y . grad)^a p, exact.
TaylorPoly directional_derivative(const TaylorPoly& p, std::span<const Rational> y, unsigned a);

/// Mixed second derivative sum_{i,j} u_i v_j d_ij p.
TaylorPoly second_directional(const TaylorPoly& p, std::span<const Rational> u,
                              std::span<const Rational> v);

/// Hbar = sum_{i,j} x_i^2 x_j^2 (d_ij H)^2, the fourth power of the second-derivative gauge.
TaylorPoly hessian_gauge_fourth_power(const TaylorPoly& H);

}  // namespace npoly
