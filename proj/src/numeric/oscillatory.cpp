#include "newtonpoly/numeric/oscillatory.hpp"

#include "newtonpoly/numeric/parallel.hpp"
#include "newtonpoly/simd/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace npoly::numeric {

namespace {

constexpr int kGauss = 8;

struct GaussRule {
  std::array<double, kGauss> x{}, w{};
  GaussRule() {
    using G = boost::math::quadrature::gauss<double, kGauss>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (int i = 0; i < kGauss / 2; ++i) {
      x[kGauss / 2 - 1 - i] = -a[i];
      w[kGauss / 2 - 1 - i] = wt[i];
      x[kGauss / 2 + i] = a[i];
      w[kGauss / 2 + i] = wt[i];
    }
  }
};

const GaussRule& rule() {
  static const GaussRule r;
  return r;
}

// Nodes and weights of a composite rule with `panels` equal panels on [a, b].
void composite(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < kGauss; ++k) {
      x.push_back(mid + 0.5 * h * rule().x[k]);
      w.push_back(0.5 * h * rule().w[k]);
    }
  }
}

struct Problem {
  std::size_t n;
  simd::MonomialTable H;
  std::vector<simd::MonomialTable> grad;
  std::vector<double> lambda;
  double radius;
  int cells;
  double h;
};

struct Cell {
  std::vector<double> lo;
  std::vector<int> base_panels;
};

double cell_lo(const Problem& P, int idx) { return -P.radius + idx * P.h; }

std::vector<Cell> make_cells(const Problem& P, double nodes_per_period) {
  const std::size_t n = P.n;
  std::vector<Cell> cells;
  std::vector<int> idx(n, 0);
  constexpr int kSamples = 7;
  const auto& K = simd::kernels();
  for (;;) {
    Cell c;
    double nearest2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = cell_lo(P, idx[i]), b = a + P.h;
      c.lo.push_back(a);
      const double d = (a > 0) ? a : (b < 0 ? -b : 0.0);
      nearest2 += d * d;
    }
    if (nearest2 < P.radius * P.radius) {
      // Sample the phase gradient on a kSamples^n grid, corners included.
      std::size_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= kSamples;
      std::vector<std::vector<double>> pts(n, std::vector<double>(total));
      for (std::size_t s = 0; s < total; ++s) {
        std::size_t rem = s;
        for (std::size_t i = 0; i < n; ++i) {
          pts[i][s] = c.lo[i] + P.h * static_cast<double>(rem % kSamples) / (kSamples - 1);
          rem /= kSamples;
        }
      }
      std::vector<const double*> ptr(n);
      for (std::size_t i = 0; i < n; ++i) ptr[i] = pts[i].data();
      std::vector<double> g(total);
      for (std::size_t i = 0; i < n; ++i) {
        K.eval_poly(P.grad[i], ptr.data(), total, g.data());
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(P.lambda[i] + P.lambda[n] * v));
        // 1.25: slack for maxima between samples.
        const double periods = 1.25 * gmax * P.h / (2.0 * std::numbers::pi);
        c.base_panels.push_back(std::max(1, static_cast<int>(std::ceil(periods * nodes_per_period / kGauss))));
      }
      cells.push_back(std::move(c));
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == P.cells) idx[i++] = 0;
    if (i == n) break;
  }
  return cells;
}

struct CellSum {
  std::complex<double> value;
  std::uint64_t nodes = 0;
};

CellSum integrate_cell(const Problem& P, const Cell& c, int scale) {
  const std::size_t n = P.n;
  const auto& K = simd::kernels();
  std::vector<std::vector<double>> xs(n), ws(n);
  for (std::size_t i = 0; i < n; ++i) composite(c.lo[i], c.lo[i] + P.h, c.base_panels[i] * scale, xs[i], ws[i]);

  const std::size_t line = xs[n - 1].size();
  std::vector<std::vector<double>> coords(n, std::vector<double>(line));
  coords[n - 1] = xs[n - 1];
  std::vector<const double*> ptr(n);
  for (std::size_t i = 0; i < n; ++i) ptr[i] = coords[i].data();
  std::vector<double> hval(line), phase(line), r2(line), psi(line), weight(line);

  double re = 0.0, im = 0.0;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> outer(n - 1, 0);
  for (;;) {
    double w_outer = 1.0, r2_outer = 0.0, lin_outer = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double xv = xs[i][outer[i]];
      std::fill(coords[i].begin(), coords[i].end(), xv);
      w_outer *= ws[i][outer[i]];
      r2_outer += xv * xv;
      lin_outer += P.lambda[i] * xv;
    }
    if (r2_outer < P.radius * P.radius) {
      K.eval_poly(P.H, ptr.data(), line, hval.data());
      const double lam_last = P.lambda[n - 1], lam_h = P.lambda[n];
      for (std::size_t k = 0; k < line; ++k) {
        const double xl = xs[n - 1][k];
        phase[k] = lin_outer + lam_last * xl + lam_h * hval[k];
        r2[k] = r2_outer + xl * xl;
      }
      K.bump(r2.data(), line, P.radius, psi.data());
      for (std::size_t k = 0; k < line; ++k) weight[k] = w_outer * ws[n - 1][k] * psi[k];
      const auto s = K.phase_sum(phase.data(), weight.data(), line);
      re += s.re;
      im += s.im;
      nodes += line;
    }
    std::size_t i = 0;
    while (i + 1 < n && ++outer[i] == xs[i].size()) outer[i++] = 0;
    if (i + 1 >= n) break;
  }
  // exp(-i phase) = cos - i sin
  return {std::complex<double>(re, -im), nodes};
}

CellSum integrate_all(const Problem& P, const std::vector<Cell>& cells, int scale, unsigned threads) {
  std::vector<CellSum> parts(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { parts[i] = integrate_cell(P, cells[i], scale); },
               threads ? threads : default_thread_count());
  CellSum total;
  for (const auto& p : parts) {
    total.value += p.value;
    total.nodes += p.nodes;
  }
  return total;
}

}  // namespace

ToleranceNotMet::ToleranceNotMet(const OscillatoryResult& b, double tol)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "quadrature tolerance " << tol << " not met; best relative error " << b.rel_err;
        return os.str();
      }()),
      best(b) {}

OscillatoryResult oscillatory_integral(const TaylorPoly& H, const BumpFunction& psi, std::span<const double> lambda,
                                       const OscillatoryOptions& opt) {
  const std::size_t n = H.dim();
  if (psi.dim() != n) throw DimensionMismatch("bump and polynomial dimensions differ");
  if (lambda.size() != n + 1) throw DimensionMismatch("frequency vector must have n + 1 entries");
  if (opt.cells_per_axis < 2 || opt.cells_per_axis % 2) throw std::invalid_argument("cells_per_axis must be even");

  Problem P;
  P.n = n;
  P.H = simd::MonomialTable::from(H);
  for (std::size_t i = 0; i < n; ++i) P.grad.push_back(simd::MonomialTable::from(H.partial(i)));
  P.lambda.assign(lambda.begin(), lambda.end());
  P.radius = psi.radius();
  P.cells = opt.cells_per_axis;
  P.h = 2.0 * P.radius / P.cells;
  const auto cells = make_cells(P, opt.nodes_per_period);

  OscillatoryResult best;
  CellSum coarse = integrate_all(P, cells, 1, opt.threads);
  for (int level = 0, scale = 1; level < opt.max_doublings; ++level, scale *= 2) {
    CellSum fine = integrate_all(P, cells, 2 * scale, opt.threads);
    OscillatoryResult r;
    r.value = fine.value;
    r.abs_err = std::abs(fine.value - coarse.value);
    r.rel_err = std::abs(fine.value) > 0 ? r.abs_err / std::abs(fine.value) : (r.abs_err == 0 ? 0.0 : INFINITY);
    r.resolution = scale;
    r.nodes = coarse.nodes + fine.nodes;
    if (level == 0 || r.rel_err < best.rel_err) best = r;
    if (r.rel_err < opt.tol || r.abs_err <= 1e-15 * psi.mass()) return r;
    coarse = std::move(fine);
  }
  throw ToleranceNotMet(best, opt.tol);
}

}  // namespace npoly::numeric
