#include "newtonpoly/lp.hpp"

#include <optional>
#include <stdexcept>

namespace npoly::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][n_]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j <= n_; ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  // Minimizes cost over columns [0, active_cols). Returns false if unbounded.
  bool optimize(const std::vector<Rational>& cost, std::size_t active_cols) {
    for (;;) {
      // reduced cost r_j = c_j - c_B B^{-1} A_j ; tableau already holds B^{-1}A
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < active_cols && !enter; ++j) {
        Rational rc = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (t_[i][j] != 0) rc -= cost[basis_[i]] * t_[i][j];
        if (rc < 0) enter = j;
      }
      if (!enter) return true;
      const std::size_t j = *enter;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][j] <= 0) continue;
        Rational ratio = t_[i][n_] / t_[i][j];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, j);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const Problem& problem) {
  const std::size_t m = problem.A.size();
  const std::size_t n = problem.c.size();
  if (problem.b.size() != m) throw std::invalid_argument("lp: b has wrong length");
  for (const auto& row : problem.A)
    if (row.size() != n) throw std::invalid_argument("lp: ragged constraint matrix");

  Tableau tab(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = problem.b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = flip ? -problem.A[i][j] : problem.A[i][j];
    tab.at(i, n + i) = 1;
    tab.rhs(i) = flip ? -problem.b[i] : problem.b[i];
    tab.basis()[i] = n + i;
  }

  std::vector<Rational> phase1(n + m, 0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  tab.optimize(phase1, n + m);

  Rational infeas = 0;
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] >= n) infeas += tab.rhs(i);
  Solution sol;
  if (infeas != 0) {
    sol.status = Status::infeasible;
    return sol;
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j)
      if (tab.at(i, j) != 0) col = j;
    if (col) {
      tab.pivot(i, *col);
      ++i;
    } else {
      tab.drop_row(i);
    }
  }

  std::vector<Rational> cost(n + m, 0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = problem.c[j];
  if (!tab.optimize(cost, n)) {
    sol.status = Status::unbounded;
    return sol;
  }

  sol.status = Status::optimal;
  sol.x.assign(n, 0);
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < n) sol.x[tab.basis()[i]] = tab.rhs(i);
  sol.value = 0;
  for (std::size_t j = 0; j < n; ++j) sol.value += problem.c[j] * sol.x[j];
  return sol;
}

bool feasible(const Problem& problem) {
  Problem p = problem;
  p.c.assign(p.c.size(), 0);
  return solve(p).status != Status::infeasible;
}

}  // namespace npoly::lp
