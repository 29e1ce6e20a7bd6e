#include "newtonpoly/numeric/threshold.hpp"

#include "newtonpoly/numeric/parallel.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace npoly::numeric {

std::string to_string(WeightKind k) { return k == WeightKind::h_star ? "H*" : "P"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void eval_log(const Damping& w, WeightKind kind, const double* const* coords, std::size_t count, double* out) {
  if (kind == WeightKind::h_star)
    w.log_H_star_batch(coords, count, out);
  else
    w.log_P_batch(coords, count, out);
}

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_rule(int g, std::vector<double>& x, std::vector<double>& wt) {
  x.clear();
  wt.clear();
  auto push = [&](const auto& ab, const auto& wb) {
    const std::size_t half = ab.size();
    for (std::size_t i = 0; i < half; ++i) {
      const double a = ab[i];
      if (a == 0.0) {
        x.push_back(0.0);
        wt.push_back(wb[i]);
      } else {
        x.push_back(a);
        wt.push_back(wb[i]);
        x.push_back(-a);
        wt.push_back(wb[i]);
      }
    }
  };
  using namespace boost::math::quadrature;
  switch (g) {
    case 4: push(gauss<double, 4>::abscissa(), gauss<double, 4>::weights()); break;
    case 6: push(gauss<double, 6>::abscissa(), gauss<double, 6>::weights()); break;
    case 8: push(gauss<double, 8>::abscissa(), gauss<double, 8>::weights()); break;
    default: throw std::invalid_argument("gauss must be 4, 6 or 8");
  }
}

// Per shell j: log-weights and log W at every node of every rectangle with max k_i = j.
struct Shells {
  std::vector<std::vector<double>> log_w, log_v;
};

Shells build_shells(const Damping& w, WeightKind kind, const ThresholdOptions& opt, std::size_t n) {
  std::vector<double> gx, gw;
  gauss_rule(opt.gauss, gx, gw);
  const std::size_t G = gx.size();
  Shells s;
  s.log_w.resize(opt.j_max + 1);
  s.log_v.resize(opt.j_max + 1);
  parallel_for(
      static_cast<std::size_t>(opt.j_max + 1),
      [&](std::size_t j) {
        std::vector<std::vector<double>> coords(n);
        std::vector<double> lw;
        std::vector<int> k(n, 0);
        for (;;) {
          if (*std::max_element(k.begin(), k.end()) == static_cast<int>(j)) {
            for (unsigned orth = 0; orth < (1u << n); ++orth) {
              std::vector<std::size_t> node(n, 0);
              for (;;) {
                double lwt = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                  const double hi = std::ldexp(1.0, -k[i]), lo = 0.5 * hi, half = 0.5 * (hi - lo);
                  double xi = lo + half * (1.0 + gx[node[i]]);
                  if (orth >> i & 1u) xi = -xi;
                  coords[i].push_back(xi);
                  lwt += std::log(gw[node[i]] * half);
                }
                lw.push_back(lwt);
                std::size_t i = 0;
                while (i < n && ++node[i] == G) node[i++] = 0;
                if (i == n) break;
              }
            }
          }
          std::size_t i = 0;
          while (i < n && ++k[i] > static_cast<int>(j)) k[i++] = 0;
          if (i == n) break;
        }
        std::vector<const double*> ptr(n);
        for (std::size_t i = 0; i < n; ++i) ptr[i] = coords[i].data();
        std::vector<double> lv(lw.size());
        eval_log(w, kind, ptr.data(), lw.size(), lv.data());
        s.log_w[j] = std::move(lw);
        s.log_v[j] = std::move(lv);
      },
      opt.threads ? opt.threads : default_thread_count());
  return s;
}

// Growth rate b in log2 s_j ~ a + b j + c log2 j.
double shell_slope(const Shells& s, const ThresholdOptions& opt, double t) {
  const int count = opt.j_max - opt.j_min + 1;
  Eigen::MatrixXd A(count, 3);
  Eigen::VectorXd y(count);
  for (int r = 0; r < count; ++r) {
    const int j = opt.j_min + r;
    const auto& lw = s.log_w[j];
    const auto& lv = s.log_v[j];
    double mx = -kInf;
    for (std::size_t q = 0; q < lw.size(); ++q)
      if (std::isfinite(lv[q])) mx = std::max(mx, lw[q] - t * lv[q]);
    double acc = 0.0;
    for (std::size_t q = 0; q < lw.size(); ++q)
      if (std::isfinite(lv[q])) acc += std::exp(lw[q] - t * lv[q] - mx);
    y(r) = (mx + std::log(acc)) / std::log(2.0);
    A(r, 0) = 1.0;
    A(r, 1) = j;
    A(r, 2) = std::log2(static_cast<double>(j));
  }
  return A.colPivHouseholderQr().solve(y)(1);
}

ThresholdBracket origin_mechanism(const Damping& w, WeightKind kind, const ThresholdOptions& opt, std::size_t n) {
  const Shells s = build_shells(w, kind, opt, n);
  ThresholdBracket b;
  if (shell_slope(s, opt, 0.0) >= 0.0) {
    b.inconclusive = true;
    return b;
  }
  if (shell_slope(s, opt, opt.t_max) < 0.0) {
    b.lo = opt.t_max;
    return b;
  }
  double lo = 0.0, hi = opt.t_max;
  while (hi - lo > opt.t_tol) {
    const double mid = 0.5 * (lo + hi);
    (shell_slope(s, opt, mid) < 0.0 ? lo : hi) = mid;
  }
  b.lo = lo;
  b.hi = hi;
  return b;
}

struct LocalFit {
  ThresholdBracket bracket;
  std::optional<double> kappa, se;
};

LocalFit local_mechanism(const Damping& w, WeightKind kind, const ThresholdOptions& opt, std::size_t n) {
  if (n != 2) throw std::invalid_argument("the local mechanism samples n = 2 only");
  // R2 low-discrepancy points (plastic-number rotation): unlike a lattice they have no
  // rational directions, so zero sets along lines are sampled evenly.
  const std::size_t total_points = static_cast<std::size_t>(opt.local_grid) * opt.local_grid;
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t chunks = (total_points + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> rows(chunks);
  parallel_for(
      chunks,
      [&](std::size_t c) {
        std::vector<double> c1, c2;
        const std::size_t end = std::min(total_points, (c + 1) * kChunk);
        for (std::size_t idx = c * kChunk; idx < end; ++idx) {
          const double k = static_cast<double>(idx + 1);
          const double x1 = 2.0 * std::fmod(0.5 + a1 * k, 1.0) - 1.0;
          const double x2 = 2.0 * std::fmod(0.5 + a2 * k, 1.0) - 1.0;
          if (std::abs(x1) < opt.local_margin || std::abs(x2) < opt.local_margin) continue;
          c1.push_back(x1);
          c2.push_back(x2);
        }
        const double* ptr[2] = {c1.data(), c2.data()};
        rows[c].resize(c1.size());
        eval_log(w, kind, ptr, c1.size(), rows[c].data());
      },
      opt.threads ? opt.threads : default_thread_count());
  std::vector<double> v;
  for (auto& r : rows)
    for (double q : r)
      if (!std::isnan(q)) v.push_back(q);
  LocalFit out;
  out.bracket.lo = opt.t_max;
  if (v.empty()) return out;
  std::sort(v.begin(), v.end());
  const double total = static_cast<double>(v.size());
  const double ref = v[v.size() / 2];
  std::vector<double> ls, lm;
  for (int i = 1; i < 200; ++i) {
    const double level = ref - i * std::log(2.0);
    const double cnt = static_cast<double>(std::lower_bound(v.begin(), v.end(), level) - v.begin());
    if (cnt < opt.min_count) break;
    if (cnt > opt.local_fraction * total) continue;
    ls.push_back(level);
    lm.push_back(std::log(cnt / total));
  }
  // A hard zero set (log W = -inf) shows up as a level count that never drops.
  if (ls.size() < 3) return out;
  const int m = static_cast<int>(ls.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = ls[i];
    y(i) = lm[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - A * c;
  double se = 0.0;
  if (m > 2) {
    const double s2 = res.squaredNorm() / (m - 2);
    se = std::sqrt(s2 * (A.transpose() * A).inverse()(1, 1));
  }
  out.kappa = c(1);
  out.se = se;
  const double half = std::max(2.0 * se, opt.min_halfwidth);
  if (c(1) - half >= opt.t_max) return out;
  out.bracket.lo = std::max(0.0, c(1) - half);
  out.bracket.hi = c(1) + half;
  return out;
}

}  // namespace

ThresholdEstimate integrability_threshold(const Damping& w, WeightKind kind, const ThresholdOptions& opt) {
  const std::size_t n = w.Hbar().dim();
  if (n < 1 || n > 3) throw std::invalid_argument("integrability_threshold supports n <= 3");
  if (opt.j_min < 2 || opt.j_max < opt.j_min + 4) throw std::invalid_argument("need j_max >= j_min + 4 >= 6");
  ThresholdEstimate e;
  e.origin = origin_mechanism(w, kind, opt, n);
  // H* vanishes only on the coordinate cross, which the shells already cover.
  if (n == 2 && kind == WeightKind::damping) {
    auto loc = local_mechanism(w, kind, opt, n);
    e.local = loc.bracket;
    e.local_exponent = loc.kappa;
    e.local_stderr = loc.se;
  } else {
    e.local.lo = opt.t_max;
  }
  e.combined.lo = std::min(e.origin.lo, e.local.lo);
  e.combined.hi = std::min(e.origin.hi, e.local.hi);
  e.combined.inconclusive = e.origin.inconclusive;
  if (e.combined.infinite())
    e.mechanism = "none";
  else
    e.mechanism = e.origin.hi <= e.local.hi ? "origin" : "local";
  return e;
}

}  // namespace npoly::numeric
