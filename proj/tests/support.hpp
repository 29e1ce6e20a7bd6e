#pragma once

#include "newtonpoly/taylor.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

using npoly::MultiIndex;
using npoly::Rational;
using npoly::TaylorPoly;

inline TaylorPoly poly(std::size_t n, std::vector<std::pair<std::vector<int>, Rational>> terms) {
  TaylorPoly p(n);
  for (auto& [a, c] : terms) p.add_term(MultiIndex(a), c);
  return p;
}

inline TaylorPoly x(std::size_t n, std::size_t i) { return TaylorPoly::variable(n, i); }

struct NamedPoly {
  std::string name;
  TaylorPoly H;
};

// The classification ladder plus the degenerate pair.
inline std::vector<NamedPoly> fixtures() {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  return {
      {"x1^2+x2^2", x1 * x1 + x2 * x2},
      {"x1^2x2^2", x1 * x1 * x2 * x2},
      {"x1^4+x2^4", x1.pow(4) + x2.pow(4)},
      {"(x2-x1^2)^2", (x2 - x1 * x1).pow(2)},
      {"(x2-x1^2)^3", (x2 - x1 * x1).pow(3)},
      {"x1^6+x2^6", x1.pow(6) + x2.pow(6)},
      {"(x1+x2)^4", (x1 + x2).pow(4)},
      {"x1^3", x1.pow(3)},
      {"x1^2+x2^2+x1^5", x1 * x1 + x2 * x2 + x1.pow(5)},
  };
}

/// Sparse random polynomial: `terms` distinct exponents in [0, max_exp]^n with total degree >= 2,
/// nonzero small rational coefficients.
inline TaylorPoly random_sparse(std::mt19937_64& rng, std::size_t n, int terms, int max_exp) {
  std::uniform_int_distribution<int> e(0, max_exp);
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  TaylorPoly p(n);
  int guard = 0;
  while (static_cast<int>(p.term_count()) < terms && guard++ < 1000) {
    std::vector<int> a(n);
    int deg = 0;
    for (auto& v : a) deg += (v = e(rng));
    if (deg < 2 || p.coefficient(MultiIndex(a)) != 0) continue;
    int c = 0;
    while (c == 0) c = num(rng);
    p.add_term(MultiIndex(a), Rational(c, den(rng)));
  }
  return p;
}

}  // namespace testsupport
