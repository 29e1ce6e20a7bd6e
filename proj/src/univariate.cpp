#include "newtonpoly/univariate.hpp"

#include <stdexcept>

namespace npoly {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> m = c_;
  const Rational l = lead();
  for (auto& v : m) v /= l;
  return UPoly(std::move(m));
}

Rational UPoly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int UPoly::sign_at_pos_infinity() const {
  if (is_zero()) return 0;
  return lead() > 0 ? 1 : -1;
}

int UPoly::sign_at_neg_infinity() const {
  if (is_zero()) return 0;
  const int s = lead() > 0 ? 1 : -1;
  return (degree() % 2 == 0) ? s : -s;
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] + o[i];
  return UPoly(std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] - o[i];
  return UPoly(std::move(r));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly();
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return UPoly(std::move(r));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
  if (d.is_zero()) throw std::domain_error("UPoly::divmod by zero polynomial");
  std::vector<Rational> rem = c_;
  if (degree() < d.degree()) return {UPoly(), *this};
  std::vector<Rational> q(c_.size() - d.c_.size() + 1);
  for (int k = degree() - d.degree(); k >= 0; --k) {
    const Rational f = rem[static_cast<std::size_t>(k) + d.c_.size() - 1] / d.lead();
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < d.c_.size(); ++j) rem[static_cast<std::size_t>(k) + j] -= f * d.c_[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(rem))};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  std::vector<UPoly> out;
  if (p.degree() <= 0) return out;
  const UPoly f = p.monic();
  const UPoly fp = f.derivative();
  UPoly a = gcd(f, fp);
  UPoly b = f.divmod(a).first;
  UPoly c = fp.divmod(a).first;
  UPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly ai = gcd(b, d);
    out.push_back(ai);
    b = b.divmod(ai).first;
    c = d.divmod(ai).first;
    d = c - b.derivative();
  }
  return out;
}

namespace {

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    UPoly r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(UPoly() - r);
  }
  return chain;
}

template <class SignFn>
int sign_variations(const std::vector<UPoly>& chain, SignFn&& sign_of) {
  int variations = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign_of(q);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

SignedRootCount count_nonzero_real_roots(const UPoly& p) {
  SignedRootCount out;
  if (p.degree() <= 0) return out;
  // Strip the root at zero.
  std::size_t shift = 0;
  while (p[shift] == 0) ++shift;
  UPoly q(std::vector<Rational>(p.coeffs().begin() + static_cast<std::ptrdiff_t>(shift), p.coeffs().end()));
  if (q.degree() <= 0) return out;
  const auto chain = sturm_chain(q);
  const int v_neg = sign_variations(chain, [](const UPoly& u) { return u.sign_at_neg_infinity(); });
  const int v_zero = sign_variations(chain, [](const UPoly& u) { return sign(u[0]); });
  const int v_pos = sign_variations(chain, [](const UPoly& u) { return u.sign_at_pos_infinity(); });
  out.negative = v_neg - v_zero;
  out.positive = v_zero - v_pos;
  return out;
}

int max_nonzero_root_multiplicity(const UPoly& p, bool allow_negative) {
  const auto factors = squarefree_decomposition(p);
  int best = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto cnt = count_nonzero_real_roots(factors[i]);
    if (cnt.positive > 0 || (allow_negative && cnt.negative > 0)) best = static_cast<int>(i) + 1;
  }
  return best;
}

}  // namespace npoly

namespace npoly {

namespace {

int count_in(const std::vector<UPoly>& chain, const Rational& lo, const Rational& hi) {
  auto at = [](const Rational& x) {
    return [x](const UPoly& u) { return sign(u.evaluate(x)); };
  };
  return sign_variations(chain, at(lo)) - sign_variations(chain, at(hi));
}

void isolate(const UPoly& p, const std::vector<UPoly>& chain, Rational lo, Rational hi, int count,
             std::vector<double>& out) {
  if (count == 0) return;
  if (count == 1) {
    // Simple root with a sign change on (lo, hi]; bisect to double resolution.
    for (int it = 0; it < 80; ++it) {
      Rational mid = (lo + hi) / 2;
      const int sm = sign(p.evaluate(mid));
      if (sm == 0) {
        out.push_back(to_double(mid));
        return;
      }
      if (sm == sign(p.evaluate(hi)))
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(to_double((lo + hi) / 2));
    return;
  }
  Rational mid = (lo + hi) / 2;
  isolate(p, chain, lo, mid, count_in(chain, lo, mid), out);
  isolate(p, chain, mid, hi, count_in(chain, mid, hi), out);
}

}  // namespace

std::vector<double> isolate_nonzero_real_roots(const UPoly& squarefree) {
  std::vector<double> out;
  if (squarefree.degree() <= 0) return out;
  std::size_t shift = 0;
  while (squarefree[shift] == 0) ++shift;
  UPoly q(std::vector<Rational>(squarefree.coeffs().begin() + static_cast<std::ptrdiff_t>(shift),
                                squarefree.coeffs().end()));
  if (q.degree() <= 0) return out;
  // Cauchy bound on |root|.
  Rational bound = 0;
  for (int i = 0; i < q.degree(); ++i) bound = std::max(bound, Rational(abs(q[static_cast<std::size_t>(i)] / q.lead())));
  bound += 1;
  const auto chain = sturm_chain(q);
  const Rational zero = 0;
  isolate(q, chain, -bound, zero, count_in(chain, -bound, zero), out);
  isolate(q, chain, zero, bound, count_in(chain, zero, bound), out);
  return out;
}

}  // namespace npoly
