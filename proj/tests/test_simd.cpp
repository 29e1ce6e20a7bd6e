#include "newtonpoly/simd/kernels.hpp"
#include "support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace npoly;
using namespace npoly::simd;

namespace {

// Every table that can run here; the scalar one is always first.
std::vector<const KernelTable*> tables() {
  std::vector<const KernelTable*> t{&scalar_kernels()};
  if (avx2_kernels()) t.push_back(avx2_kernels());
  return t;
}

}  // namespace

TEST_CASE("sincos kernels agree with libm across reduction ranges") {
  std::mt19937_64 rng(11);
  for (double span : {1.0, 1e2, 1e4, 1e6}) {
    std::uniform_real_distribution<double> u(-span, span);
    std::vector<double> x(1003);
    for (auto& v : x) v = u(rng);
    x[0] = 0.0;
    x[1] = M_PI / 2;
    x[2] = -M_PI;
    for (const auto* K : tables()) {
      CAPTURE(K->name);
      std::vector<double> s(x.size()), c(x.size());
      K->sincos(x.data(), x.size(), s.data(), c.data());
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max({worst, std::abs(s[i] - std::sin(x[i])), std::abs(c[i] - std::cos(x[i]))});
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("polynomial batch evaluation matches the exact-coefficient evaluator") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const TaylorPoly p = testsupport::random_sparse(rng, n, 3 + trial % 6, 9);
    const MonomialTable tab = MonomialTable::from(p);
    const std::size_t count = 37 + trial;  // exercises the vector tail
    std::vector<std::vector<double>> cols(n, std::vector<double>(count));
    for (auto& col : cols)
      for (auto& v : col) v = u(rng);
    std::vector<const double*> ptr;
    for (auto& col : cols) ptr.push_back(col.data());
    for (const auto* K : tables()) {
      CAPTURE(K->name);
      std::vector<double> out(count);
      K->eval_poly(tab, ptr.data(), count, out.data());
      for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> x(n);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) x[i] = cols[i][k];
        for (const auto& [a, c] : p.terms()) {
          double m = std::abs(to_double(c));
          for (std::size_t i = 0; i < n; ++i) m *= std::pow(std::abs(x[i]), a[i]);
          scale += m;
        }
        CHECK(std::abs(out[k] - p.evaluate(std::span<const double>(x))) <= 1e-13 * (1.0 + scale));
      }
    }
  }
}

TEST_CASE("phase sums agree between kernels") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ph(-5e4, 5e4), w(0.0, 1.0);
  for (std::size_t count : {1u, 3u, 4u, 17u, 1000u}) {
    std::vector<double> p(count), wt(count);
    double wsum = 0.0, re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      p[i] = ph(rng);
      wt[i] = w(rng);
      wsum += wt[i];
      re += wt[i] * std::cos(p[i]);
      im += wt[i] * std::sin(p[i]);
    }
    for (const auto* K : tables()) {
      CAPTURE(K->name);
      const PhaseSum s = K->phase_sum(p.data(), wt.data(), count);
      CHECK(std::abs(s.re - re) <= 1e-12 * wsum);
      CHECK(std::abs(s.im - im) <= 1e-12 * wsum);
    }
  }
}

TEST_CASE("bump profile kernels agree and respect plateau and support") {
  const double r = 0.5;
  std::vector<double> r2;
  for (int i = 0; i <= 400; ++i) {
    const double rho = 0.6 * i / 400.0;
    r2.push_back(rho * rho);
  }
  std::vector<double> ref(r2.size());
  scalar_kernels().bump(r2.data(), r2.size(), r, ref.data());
  for (std::size_t i = 0; i < r2.size(); ++i) {
    const double rho = std::sqrt(r2[i]);
    if (rho <= r / 2) CHECK(ref[i] == 1.0);
    if (rho >= r) CHECK(ref[i] == 0.0);
    if (i) CHECK(ref[i] <= ref[i - 1]);
    CHECK(ref[i] == doctest::Approx(bump_profile(rho, r)).epsilon(1e-15));
  }
  for (const auto* K : tables()) {
    CAPTURE(K->name);
    std::vector<double> out(r2.size());
    K->bump(r2.data(), r2.size(), r, out.data());
    for (std::size_t i = 0; i < r2.size(); ++i) CHECK(std::abs(out[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("dispatch honours the active table") {
  const KernelTable& k = kernels();
  if (active_isa() == Isa::avx2)
    CHECK(&k == avx2_kernels());
  else
    CHECK(&k == &scalar_kernels());
}
