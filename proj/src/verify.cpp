#include "newtonpoly/verify.hpp"

#include "newtonpoly/numeric/damping.hpp"
#include "newtonpoly/numeric/envelope.hpp"
#include "newtonpoly/numeric/scaling.hpp"
#include "newtonpoly/numeric/sublevel.hpp"
#include "newtonpoly/numeric/threshold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace npoly::verify {

namespace {

// Fixed acceptance constants; see README for their meaning.
constexpr double kBracketRatio = 4.0;       // sublevel quantity / envelope, max over min
constexpr double kConstantDrift = 1.1;      // fitted constant after 4x more samples
constexpr double kRatioSlope = 0.05;        // |T| / envelope may not grow faster than this in log-log
constexpr double kHStarThresholdTol = 0.05;
constexpr double kPThresholdTol = 0.1;

double max_ratio_in_ball(const numeric::Damping& W, const TaylorPoly& H, int samples, double radius, bool second,
                         std::uint64_t seed) {
  const std::size_t n = H.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> x(n);
  double worst = 0.0;
  for (int i = 0; i < samples;) {
    double r2 = 0.0;
    for (auto& v : x) {
      v = u(rng);
      r2 += v * v;
    }
    if (r2 > radius * radius) continue;
    ++i;
    const double hs = W.H_star(x);
    if (hs == 0.0) continue;
    const double r = second ? W.H_star_star(x) / std::sqrt(hs) : std::abs(H.evaluate(std::span<const double>(x))) / hs;
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed || p.skipped; });
}

io::Json VerifyReport::to_json() const {
  io::Json props = io::Json::array();
  for (const auto& p : properties)
    props.push_back({{"name", p.name}, {"passed", p.passed}, {"skipped", p.skipped}, {"details", p.details}});
  return {{"schema", io::kVerifySchema}, {"passed", passed()}, {"properties", props}};
}

TaylorPoly random_polynomial(std::mt19937_64& rng, std::size_t n, int terms, int max_exp) {
  std::uniform_int_distribution<int> e(0, max_exp), num(-4, 4), den(1, 3);
  TaylorPoly p(n);
  for (int guard = 0; static_cast<int>(p.term_count()) < terms && guard < 1000; ++guard) {
    std::vector<int> a(n);
    int deg = 0;
    for (auto& v : a) deg += (v = e(rng));
    if (deg < 2 || p.coefficient(MultiIndex(a)) != 0) continue;
    int c = 0;
    while (c == 0) c = num(rng);
    p.add_term(MultiIndex(std::move(a)), Rational(c, den(rng)));
  }
  return p;
}

PropertyResult check_scaling(const TaylorPoly& H) {
  PropertyResult r{"newton_scaling"};
  const auto c = numeric::newton_scaling_check(H);
  r.passed = c.passed();
  r.details["polyhedron_equal"] = c.polyhedron_ok;
  io::Json faces = io::Json::array();
  for (const auto& f : c.faces)
    faces.push_back({{"face", io::face_to_json(f.face)},
                     {"order_H", f.order_H},
                     {"order_Hbar", f.order_Hbar},
                     {"expected", f.expected}});
  r.details["faces"] = faces;
  return r;
}

PropertyResult check_products(const TaylorPoly& H, std::uint64_t seed, int corpus) {
  PropertyResult r{"product_identity"};
  auto one = [](const TaylorPoly& p, int k) {
    const TaylorPoly q = p.pow(static_cast<unsigned>(k));
    const auto Np = build_polyhedron(p);
    if (!scaled_polyhedron_equal(Np, build_polyhedron(q), Rational(k))) return false;
    for (const auto& F : Np.compact_faces())
      if (!(face_restrict(q, dilate_face(F, k)) == face_restrict(p, F).pow(static_cast<unsigned>(k)))) return false;
    return true;
  };
  int checked = 0, failed = 0;
  for (int k : {2, 3}) {
    ++checked;
    failed += !one(H, k);
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = std::min<std::size_t>(H.dim(), 3);
  for (int i = 0; i < corpus; ++i) {
    const TaylorPoly p = random_polynomial(rng, n, 2 + i % 4, 4);
    ++checked;
    failed += !one(p, 2 + i % 2);
  }
  r.passed = failed == 0;
  r.details = {{"checked", checked}, {"failed", failed}, {"seed", seed}};
  return r;
}

PropertyResult check_degeneracy(const TaylorPoly& H, const AnalysisReport& a) {
  PropertyResult r{"degeneracy_structure"};
  r.details["hessian_condition_holds"] = a.degeneracy.hessian_condition_holds;
  r.passed = true;
  if (a.degeneracy.structural_form) {
    // Each recorded c (beta . x)^m must reproduce its face polynomial exactly.
    io::Json faces = io::Json::array();
    for (const auto& s : *a.degeneracy.structural_form) {
      TaylorPoly lin(H.dim());
      for (std::size_t i = 0; i < H.dim(); ++i) lin = lin + TaylorPoly::variable(H.dim(), i) * s.beta[i];
      const bool exact = lin.pow(static_cast<unsigned>(s.m)) * s.c == face_restrict(H, s.face);
      r.passed = r.passed && exact;
      faces.push_back({{"c", to_string(s.c)}, {"m", s.m}, {"reconstructs_face", exact}});
    }
    r.details["structural_form"] = faces;
  } else {
    r.details["structural_form"] = nullptr;
  }
  return r;
}

PropertyResult check_damping_bounds(const TaylorPoly& H, const AnalysisReport& a, double delta, std::uint64_t seed) {
  PropertyResult r{"damping_bounds"};
  numeric::DampingParams p{.delta = delta, .pair = std::nullopt, .d = a.distance.d, .M = a.zeros.M};
  if (delta > 0 && a.direction_pair) p.pair = a.direction_pair;
  const numeric::Damping W(H, p);
  const double c1 = max_ratio_in_ball(W, H, 10000, 1.0, true, seed);
  const double c2 = max_ratio_in_ball(W, H, 40000, 1.0, true, seed + 1);
  const double e1 = max_ratio_in_ball(W, H, 10000, 0.1, false, seed);
  const double e2 = max_ratio_in_ball(W, H, 40000, 0.1, false, seed + 1);
  // P itself: finite, nonnegative, never flagged singular on the same kind of samples.
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(H.dim());
  bool p_ok = true;
  for (int i = 0; i < 10000; ++i) {
    for (auto& v : x) v = u(rng);
    const auto v = W.P(x);
    p_ok = p_ok && !v.singular && std::isfinite(v.value) && v.value >= 0;
  }
  const bool hss = std::isfinite(c1) && c2 <= kConstantDrift * c1;
  const bool hh = std::isfinite(e1) && e2 <= kConstantDrift * e1;
  r.passed = hss && hh && p_ok;
  r.details = {{"hstarstar_over_sqrt_hstar", {c1, c2}},
               {"abs_H_over_hstar", {e1, e2}},
               {"P_finite", p_ok},
               {"delta_used", p.pair ? delta : 0.0}};
  return r;
}

PropertyResult check_sublevel_brackets(const AnalysisReport& a, std::uint64_t seed) {
  PropertyResult r{"sublevel_brackets"};
  r.passed = true;
  io::Json rows = io::Json::array();
  for (const auto& v : a.vertices) {
    std::vector<double> m(v.entries().begin(), v.entries().end());
    double mlo = 1e300, mhi = 0, ilo = 1e300, ihi = 0;
    for (int e = 5; e <= 20; ++e) {
      const double delta = std::ldexp(1.0, -e);
      const auto s = numeric::sublevel_measure(m, delta, {.samples = 200000, .seed = seed});
      const double meas = s.closed_form.value_or(s.mc);
      mlo = std::min(mlo, meas / s.envelope);
      mhi = std::max(mhi, meas / s.envelope);
      const auto in = numeric::sublevel_integral(m, delta);
      ilo = std::min(ilo, in.value / in.envelope);
      ihi = std::max(ihi, in.value / in.envelope);
    }
    const bool ok = mhi / mlo < kBracketRatio && ihi / ilo < kBracketRatio;
    r.passed = r.passed && ok;
    rows.push_back({{"m", v.entries()}, {"measure_bracket", {mlo, mhi}}, {"integral_bracket", {ilo, ihi}}, {"passed", ok}});
  }
  r.details["vertices"] = rows;
  return r;
}

PropertyResult check_domination(const TaylorPoly& H, const AnalysisReport& a) {
  PropertyResult r{"derivative_domination"};
  const std::size_t n = H.dim();
  // Follow the weight of the bisectrix face when it is compact: the dyadic scaling of its
  // quasi-homogeneous part.
  std::vector<int> step(n, 1);
  if (a.bisectrix.face.compact) {
    const auto& w = a.bisectrix.face.weight;
    bool integral = true;
    for (std::size_t i = 0; i < n; ++i) integral = integral && is_integer(w[i]) && w[i] <= 8;
    if (integral)
      for (std::size_t i = 0; i < n; ++i) step[i] = static_cast<int>(boost::multiprecision::numerator(w[i]));
  }
  const std::vector<int> k0(n, 2);
  const auto t = numeric::derivative_domination(H, k0, step, {.rungs = 6});
  r.passed = t.pointwise_inf > 0 && std::isfinite(t.pointwise_inf) && t.directional_inf > 0;
  io::Json rungs = io::Json::array();
  for (const auto& g : t.rungs)
    rungs.push_back({{"k", g.k}, {"pointwise", g.pointwise}, {"uniform", g.uniform}, {"directional", g.directional}});
  r.details = {{"step", step},
               {"pointwise_inf", t.pointwise_inf},
               {"uniform_inf", t.uniform_inf},
               {"directional_inf", t.directional_inf},
               {"pointwise_spread", t.pointwise_spread},
               {"rungs", rungs}};
  return r;
}

PropertyResult check_envelope(const TaylorPoly& H, const AnalysisReport& a, const VerifyOptions& opt) {
  PropertyResult r{"envelope_domination"};
  if (H.dim() > 2) {
    r.skipped = true;
    r.details["reason"] = "the dyadic envelope is integrated for n <= 2 only";
    return r;
  }
  const numeric::BumpFunction psi(H.dim(), opt.bump_radius);
  std::vector<double> ll, lr;
  io::Json rows = io::Json::array();
  double lo = 1e300, hi = 0;
  for (double lam : numeric::sweep_lambdas(opt.sweep)) {
    std::vector<double> freq(H.dim() + 1, 0.0);
    freq.back() = lam;
    const auto T = numeric::oscillatory_integral(H, psi, freq, opt.sweep.quadrature);
    const double env = numeric::dyadic_envelope(a.vertices, a.zeros.M, lam, opt.bump_radius);
    const double ratio = std::abs(T.value) / env;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ll.push_back(std::log(lam));
    lr.push_back(std::log(ratio));
    rows.push_back({{"lambda", lam}, {"absT", std::abs(T.value)}, {"envelope", env}, {"ratio", ratio}});
  }
  Eigen::MatrixXd A(ll.size(), 2);
  Eigen::VectorXd y(ll.size());
  for (std::size_t i = 0; i < ll.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = ll[i];
    y(i) = lr[i];
  }
  const double slope = A.colPivHouseholderQr().solve(y)(1);
  r.passed = slope <= kRatioSlope;
  r.details = {{"ratio_min", lo}, {"ratio_max", hi}, {"max_over_min", hi / lo}, {"log_slope", slope}, {"samples", rows}};
  return r;
}

PropertyResult check_thresholds(const TaylorPoly& H, const AnalysisReport& a) {
  PropertyResult r{"integrability_thresholds"};
  if (H.dim() > 3) {
    r.skipped = true;
    r.details["reason"] = "dyadic shells are enumerated for n <= 3 only";
    return r;
  }
  const numeric::Damping W(H, {.delta = 0.0, .pair = std::nullopt, .d = a.distance.d, .M = a.zeros.M});
  numeric::ThresholdOptions to;
  if (H.dim() == 3) to.j_max = 16;
  const auto hs = numeric::integrability_threshold(W, numeric::WeightKind::h_star, to);
  const double target = 1.0 / to_double(a.distance.d);
  bool ok_h;
  if (target >= to.t_max)
    ok_h = hs.combined.lo >= to.t_max - kHStarThresholdTol;
  else
    ok_h = hs.combined.lo >= target - kHStarThresholdTol && hs.combined.hi <= target + kHStarThresholdTol;
  auto bracket = [](const numeric::ThresholdBracket& b) {
    return io::Json{{"lo", b.lo}, {"hi", b.infinite() ? io::Json("inf") : io::Json(b.hi)}, {"inconclusive", b.inconclusive}};
  };
  r.details["H_star"] = {{"expected", target}, {"bracket", bracket(hs.combined)}, {"mechanism", hs.mechanism}, {"passed", ok_h}};

  bool ok_p = true;
  if (H.dim() == 2) {
    const auto pe = numeric::integrability_threshold(W, numeric::WeightKind::damping, to);
    if (a.interpolation.a.infinite()) {
      ok_p = pe.combined.infinite();
      r.details["P"] = {{"expected", "inf"}};
    } else {
      const double av = to_double(*a.interpolation.a.value);
      ok_p = av >= to.t_max ? pe.combined.lo >= to.t_max - kPThresholdTol
                            : pe.combined.lo >= av - kPThresholdTol && pe.combined.hi <= av + kPThresholdTol;
      r.details["P"] = {{"expected", av}};
    }
    r.details["P"]["bracket"] = bracket(pe.combined);
    r.details["P"]["mechanism"] = pe.mechanism;
    r.details["P"]["passed"] = ok_p;
  }
  r.passed = ok_h && ok_p;
  return r;
}

VerifyReport run_suite(const TaylorPoly& H, const AnalysisReport& a, const VerifyOptions& opt) {
  VerifyReport v;
  v.properties.push_back(check_scaling(H));
  v.properties.push_back(check_products(H, opt.seed, opt.random_corpus));
  v.properties.push_back(check_degeneracy(H, a));
  if (opt.numeric) {
    v.properties.push_back(check_damping_bounds(H, a, opt.delta, opt.seed));
    v.properties.push_back(check_sublevel_brackets(a, opt.seed));
    v.properties.push_back(check_domination(H, a));
    v.properties.push_back(check_thresholds(H, a));
    v.properties.push_back(check_envelope(H, a, opt));
  }
  return v;
}

}  // namespace npoly::verify
