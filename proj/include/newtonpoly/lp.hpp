#pragma once

// Dense two-phase simplex over exact rationals (Bland's rule, so it always terminates).

#include "newtonpoly/rational.hpp"

#include <vector>

namespace npoly::lp {

/// minimize c.x  subject to  A x = b,  x >= 0.
struct Problem {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  Rational value;
  std::vector<Rational> x;
};

Solution solve(const Problem& problem);

/// Feasibility only (objective ignored).
bool feasible(const Problem& problem);

}  // namespace npoly::lp
