#include "newtonpoly/numeric/sublevel.hpp"

#include "newtonpoly/numeric/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace npoly::numeric {

namespace {

struct Exponents {
  std::vector<double> nz;  // nonzero entries, in input order
  double M = 0.0;
  int l = 0;
};

Exponents check(std::span<const double> m, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  Exponents e;
  for (double v : m) {
    if (!(v >= 0.0)) throw std::invalid_argument("exponents must be nonnegative");
    if (v > 0) e.nz.push_back(v);
    e.M = std::max(e.M, v);
  }
  if (e.nz.empty()) throw std::invalid_argument("exponent vector is identically zero");
  for (double v : m) e.l += (v == e.M);
  return e;
}

// |{x in (0,1)^2 : x1^a x2^b < delta}| integrating x1 first.
double two_factor_measure(double a, double b, double delta) {
  const double x2star = std::pow(delta, 1.0 / b);  // below it every x1 qualifies
  const double q = b / a;
  const double c = std::pow(delta, 1.0 / a);
  if (std::abs(q - 1.0) < 1e-14) return x2star + c * (-std::log(x2star));
  return x2star + c * (1.0 - std::pow(x2star, 1.0 - q)) / (1.0 - q);
}

}  // namespace

SublevelMeasure sublevel_measure(std::span<const double> m, double delta, const SublevelOptions& opt) {
  const Exponents e = check(m, delta);
  SublevelMeasure out;
  out.M = e.M;
  out.l = e.l;
  const double L = -std::log(delta);
  out.envelope = std::pow(L, e.l - 1) * std::pow(delta, 1.0 / e.M);
  if (e.nz.size() == 1) out.closed_form = std::pow(delta, 1.0 / e.nz[0]);
  if (e.nz.size() == 2) out.closed_form = two_factor_measure(e.nz[0], e.nz[1], delta);

  // Tilted rates beta_i = 1 - theta m_i with sum m_i / beta_i = L (no tilt when already typical).
  const std::size_t k = e.nz.size();
  double msum = 0.0, mmax = 0.0;
  for (double v : e.nz) {
    msum += v;
    mmax = std::max(mmax, v);
  }
  double theta = 0.0;
  if (L > msum) {
    double lo = 0.0, hi = (1.0 - 1e-12) / mmax;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      double mean = 0.0;
      for (double v : e.nz) mean += v / (1.0 - mid * v);
      (mean < L ? lo : hi) = mid;
    }
    theta = 0.5 * (lo + hi);
  }
  std::vector<double> beta(k);
  double log_norm = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    beta[i] = 1.0 - theta * e.nz[i];
    log_norm -= std::log(beta[i]);
  }

  constexpr std::size_t kBatches = 16;
  const std::uint64_t per = (opt.samples + kBatches - 1) / kBatches;
  std::vector<double> s1(kBatches), s2(kBatches);
  parallel_for(
      kBatches,
      [&](std::size_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(b)};
        std::mt19937_64 rng(seq);
        std::vector<std::exponential_distribution<double>> draw;
        for (double r : beta) draw.emplace_back(r);
        double a1 = 0.0, a2 = 0.0;
        for (std::uint64_t s = 0; s < per; ++s) {
          double sum = 0.0, log_w = log_norm;
          for (std::size_t i = 0; i < k; ++i) {
            const double u = draw[i](rng);
            sum += e.nz[i] * u;
            log_w -= (1.0 - beta[i]) * u;
          }
          if (sum > L) {
            const double w = std::exp(log_w);
            a1 += w;
            a2 += w * w;
          }
        }
        s1[b] = a1;
        s2[b] = a2;
      },
      opt.threads ? opt.threads : default_thread_count());
  double t1 = 0.0, t2 = 0.0;
  for (std::size_t b = 0; b < kBatches; ++b) {
    t1 += s1[b];
    t2 += s2[b];
  }
  const double N = static_cast<double>(per * kBatches);
  out.mc = t1 / N;
  const double var = std::max(0.0, t2 / N - out.mc * out.mc);
  out.mc_stderr = std::sqrt(var / N);
  return out;
}

SublevelIntegral sublevel_integral(std::span<const double> m, double delta) {
  const Exponents e = check(m, delta);
  SublevelIntegral out;
  out.M = e.M;
  out.l = e.l;
  const double L = -std::log(delta);
  if (e.M < 1.0) {
    out.regime = 'b';
    out.envelope = delta;
  } else if (e.M == 1.0) {
    out.regime = 'c';
    out.envelope = std::pow(L, e.l) * delta;
  } else {
    out.regime = 'd';
    out.envelope = std::pow(L, e.l - 1) * std::pow(delta, 1.0 / e.M);
  }

  // In u = -ln x the region is {sum m_i u_i < L} and the integrand delta * exp(sum (m_i - 1) u_i).
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_total = 0.0;
  std::function<double(std::size_t, double)> level = [&](std::size_t i, double budget) -> double {
    if (i == e.nz.size() || budget <= 0.0) return budget <= 0.0 && i < e.nz.size() ? 0.0 : 1.0;
    const double mi = e.nz[i];
    double err = 0.0;
    const double v = GK::integrate([&](double u) { return std::exp((mi - 1.0) * u) * level(i + 1, budget - mi * u); },
                                   0.0, budget / mi, 12, 1e-11, &err);
    if (i == 0) err_total = err;
    return v;
  };
  out.value = delta * level(0, L);
  out.abs_err = delta * err_total;
  return out;
}

}  // namespace npoly::numeric
