#include "newtonpoly/taylor.hpp"

#include <algorithm>
#include <sstream>

namespace npoly {

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_) {
    if (v < 0) throw std::invalid_argument("negative exponent in multi-index");
  }
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i, int power) {
  MultiIndex a(n);
  a.e_.at(i) = power;
  return a;
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) throw DimensionMismatch("multi-index dimension mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

MultiIndex MultiIndex::scaled(int r) const {
  MultiIndex out(*this);
  for (int& v : out.e_) v *= r;
  return out;
}

bool MultiIndex::divides(const MultiIndex& o) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

TaylorPoly TaylorPoly::constant(std::size_t n, const Rational& c) {
  TaylorPoly p(n);
  p.add_term(MultiIndex(n), c);
  return p;
}

TaylorPoly TaylorPoly::monomial(const MultiIndex& a, const Rational& c) {
  TaylorPoly p(a.size());
  p.add_term(a, c);
  return p;
}

TaylorPoly TaylorPoly::variable(std::size_t n, std::size_t i) {
  return monomial(MultiIndex::unit(n, i));
}

Rational TaylorPoly::coefficient(const MultiIndex& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? Rational(0) : it->second;
}

void TaylorPoly::add_term(const MultiIndex& a, const Rational& c) {
  if (a.size() != n_) throw DimensionMismatch("term dimension does not match polynomial");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int TaylorPoly::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a.total_degree());
  return d;
}

int TaylorPoly::order_at_origin() const {
  if (terms_.empty()) return 0;
  int d = terms_.begin()->first.total_degree();
  for (const auto& [a, c] : terms_) d = std::min(d, a.total_degree());
  return d;
}

int TaylorPoly::degree_in(std::size_t i) const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a[i]);
  return d;
}

TaylorPoly TaylorPoly::operator+(const TaylorPoly& o) const {
  if (o.n_ != n_) throw DimensionMismatch("polynomial dimension mismatch");
  TaylorPoly r(*this);
  for (const auto& [a, c] : o.terms_) r.add_term(a, c);
  return r;
}

TaylorPoly TaylorPoly::operator-() const {
  TaylorPoly r(*this);
  for (auto& [a, c] : r.terms_) c = -c;
  return r;
}

TaylorPoly TaylorPoly::operator-(const TaylorPoly& o) const { return *this + (-o); }

TaylorPoly TaylorPoly::operator*(const TaylorPoly& o) const {
  if (o.n_ != n_) throw DimensionMismatch("polynomial dimension mismatch");
  TaylorPoly r(n_);
  for (const auto& [a, c] : terms_)
    for (const auto& [b, d] : o.terms_) r.add_term(a + b, c * d);
  return r;
}

TaylorPoly TaylorPoly::operator*(const Rational& c) const {
  if (c == 0) return TaylorPoly(n_);
  TaylorPoly r(*this);
  for (auto& [a, v] : r.terms_) v *= c;
  return r;
}

TaylorPoly TaylorPoly::pow(unsigned r) const {
  TaylorPoly result = constant(n_, 1);
  TaylorPoly base = *this;
  while (r) {
    if (r & 1u) result = result * base;
    r >>= 1;
    if (r) base = base * base;
  }
  return result;
}

Rational TaylorPoly::evaluate(std::span<const Rational> x) const {
  if (x.size() != n_) throw DimensionMismatch("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [a, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < a[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

double TaylorPoly::evaluate(std::span<const double> x) const {
  if (x.size() != n_) throw DimensionMismatch("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [a, c] : terms_) {
    double t = to_double(c);
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < a[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

TaylorPoly TaylorPoly::partial(std::size_t i, unsigned r) const {
  if (i >= n_) throw DimensionMismatch("derivative direction out of range");
  TaylorPoly out(n_);
  for (const auto& [a, c] : terms_) {
    if (a[i] < static_cast<int>(r)) continue;
    Rational f = c;
    for (unsigned k = 0; k < r; ++k) f *= (a[i] - static_cast<int>(k));
    std::vector<int> e = a.entries();
    e[i] -= static_cast<int>(r);
    out.add_term(MultiIndex(std::move(e)), f);
  }
  return out;
}

TaylorPoly TaylorPoly::compose(std::span<const TaylorPoly> images) const {
  if (images.size() != n_) throw DimensionMismatch("compose needs one image per variable");
  const std::size_t m = images.empty() ? 0 : images[0].dim();
  for (const auto& im : images)
    if (im.dim() != m) throw DimensionMismatch("compose images disagree on dimension");

  // powers[i][k] = images[i]^k, built lazily
  std::vector<std::vector<TaylorPoly>> powers(n_);
  for (std::size_t i = 0; i < n_; ++i) powers[i].push_back(constant(m, 1));
  auto power = [&](std::size_t i, int k) -> const TaylorPoly& {
    while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(powers[i].back() * images[i]);
    return powers[i][k];
  };

  TaylorPoly out(m);
  for (const auto& [a, c] : terms_) {
    TaylorPoly t = constant(m, c);
    for (std::size_t i = 0; i < n_; ++i)
      if (a[i]) t = t * power(i, a[i]);
    out = out + t;
  }
  return out;
}

TaylorPoly TaylorPoly::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw DimensionMismatch("permutation has wrong length");
  TaylorPoly out(n_);
  for (const auto& [a, c] : terms_) {
    std::vector<int> e(n_);
    for (std::size_t i = 0; i < n_; ++i) e[perm[i]] = a[i];
    out.add_term(MultiIndex(std::move(e)), c);
  }
  return out;
}

std::string to_string(const TaylorPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree last reads more naturally for Taylor data.
  for (const auto& [a, c] : p.terms()) {
    Rational coef = c;
    if (!first) {
      os << (coef < 0 ? " - " : " + ");
      if (coef < 0) coef = -coef;
    } else if (coef < 0) {
      os << "-";
      coef = -coef;
    }
    first = false;
    bool has_var = a.total_degree() > 0;
    if (coef != 1 || !has_var) {
      os << to_string(coef);
      if (has_var) os << "*";
    }
    bool first_var = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << "x" << (i + 1);
      if (a[i] > 1) os << "^" << a[i];
    }
  }
  return os.str();
}

TaylorPoly build_H(const TaylorPoly& g, const BasePoint& z) {
  const std::size_t n = g.dim();
  if (z.z.size() != n) throw DimensionMismatch("base point dimension does not match polynomial");

  std::vector<TaylorPoly> shift;
  shift.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    shift.push_back(TaylorPoly::variable(n, i) + TaylorPoly::constant(n, z.z[i]));
  TaylorPoly G = g.compose(shift);

  // G(0) = g(z) and grad G(0) = grad g(z); dropping those terms is the recentring.
  TaylorPoly H = G.filter([](const MultiIndex& a) { return a.total_degree() >= 2; });

  const TaylorPoly expected = G - TaylorPoly::constant(n, g.evaluate(std::span<const Rational>(z.z)));
  TaylorPoly check = expected;
  for (std::size_t i = 0; i < n; ++i) {
    Rational gi = g.partial(i).evaluate(std::span<const Rational>(z.z));
    check = check - TaylorPoly::variable(n, i) * gi;
  }
  if (!(check == H)) throw std::logic_error("build_H: recentring identity failed");
  return H;
}

TaylorPoly directional_derivative(const TaylorPoly& p, std::span<const Rational> y, unsigned a) {
  if (y.size() != p.dim()) throw DimensionMismatch("direction has wrong dimension");
  TaylorPoly cur = p;
  for (unsigned k = 0; k < a; ++k) {
    TaylorPoly next(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i)
      if (y[i] != 0) next = next + cur.partial(i) * y[i];
    cur = std::move(next);
  }
  return cur;
}

TaylorPoly second_directional(const TaylorPoly& p, std::span<const Rational> u,
                              std::span<const Rational> v) {
  return directional_derivative(directional_derivative(p, u, 1), v, 1);
}

TaylorPoly hessian_gauge_fourth_power(const TaylorPoly& H) {
  const std::size_t n = H.dim();
  TaylorPoly sum(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      TaylorPoly dij = H.partial(i).partial(j);
      MultiIndex w = MultiIndex::unit(n, i, 2) + MultiIndex::unit(n, j, 2);
      sum = sum + TaylorPoly::monomial(w) * dij * dij;
    }
  }
  return sum;
}

}  // namespace npoly
