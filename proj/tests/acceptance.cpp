// One line per acceptance criterion. Tolerances and budgets are pinned here and printed with
// each verdict. Exit status is 0 iff the set of failing criteria equals --known-failures.

#include "newtonpoly/classifier.hpp"
#include "newtonpoly/numeric/bump.hpp"
#include "newtonpoly/numeric/damping.hpp"
#include "newtonpoly/numeric/decay.hpp"
#include "newtonpoly/numeric/envelope.hpp"
#include "newtonpoly/numeric/oscillatory.hpp"
#include "newtonpoly/numeric/scaling.hpp"
#include "newtonpoly/numeric/sublevel.hpp"
#include "newtonpoly/numeric/threshold.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>

using namespace npoly;
using testsupport::x;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      failures.push_back(why);
    }
  }
  std::string text() const {
    std::string s = detail.str();
    if (!failures.empty()) s += " | failed:";
    for (const auto& f : failures) s += " " + f + ";";
    return s;
  }
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Verdict&)> body;
};

TaylorPoly fixture(const std::string& name) {
  for (const auto& f : testsupport::fixtures())
    if (f.name == name) return f.H;
  throw std::logic_error("no fixture " + name);
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// --- 1 -------------------------------------------------------------------------------
void geometry_oracle(Verdict& v) {
  std::vector<TaylorPoly> corpus;
  for (const auto& f : testsupport::fixtures()) corpus.push_back(f.H);
  std::mt19937_64 rng(1729);
  for (int i = 0; i < 36; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
    corpus.push_back(testsupport::random_sparse(rng, n, 1 + static_cast<int>(rng() % 8), n == 1 ? 8 : 5));
  }
  int mismatches = 0;
  for (const auto& f : corpus) {
    const auto N = build_polyhedron(f);
    const auto d = newton_distance(N);
    const auto o = oracle::geometry(f.dim(), oracle::exponents(f));
    if (N.vertices() != o.vertices || d.d != o.d || bisectrix_face(N, d).k != o.k) ++mismatches;
  }
  v.require(corpus.size() >= 30, "corpus too small");
  v.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (v.pass) v.detail << corpus.size() << " polynomials, vertices/d/k equal to the membership oracle";
}

// --- 2 -------------------------------------------------------------------------------
void fixture_ladder(Verdict& v) {
  struct Row {
    std::string name;
    Rational d;
    std::optional<int> k, m;
    std::optional<CaseLabel> fourier;
    std::optional<int> log_power;
    std::optional<Rational> eps, p0;
    std::optional<CaseLabel> maximal;
  };
  using C = CaseLabel;
  const Row rows[] = {
      {"x1^2+x2^2", 1, 1, 0, C::A, {}, {}, Rational(2), {}},
      {"x1^2x2^2", 2, 0, 0, C::B, 2, {}, {}, C::A},
      {"x1^4+x2^4", 2, 1, {}, C::B, 1, {}, {}, {}},
      {"(x2-x1^2)^2", Rational(4, 3), {}, 2, C::A, {}, {}, {}, {}},
      {"(x2-x1^2)^3", 2, {}, 3, C::C, {}, Rational(1, 3), Rational(3), {}},
      {"x1^6+x2^6", 3, {}, {}, C::B, {}, Rational(1, 3), Rational(3), {}},
  };
  for (const auto& r : rows) {
    const auto a = analyze(fixture(r.name));
    bool ok = a.distance.d == r.d;
    if (r.k) ok = ok && a.bisectrix.k == *r.k;
    if (r.m) ok = ok && a.zeros.m == *r.m;
    if (r.fourier) ok = ok && a.fourier.case_label == *r.fourier;
    if (r.log_power) ok = ok && a.fourier.log_power == *r.log_power;
    if (r.eps) ok = ok && a.fourier.epsilon == *r.eps;
    if (r.p0) ok = ok && a.maximal.p0 == *r.p0;
    if (r.maximal) ok = ok && a.maximal.case_label == *r.maximal;
    v.require(ok, r.name + " misclassified");
  }
  if (v.pass) v.detail << "6 fixtures, exact";
}

// --- 3 -------------------------------------------------------------------------------
constexpr double kEpsTol = 0.05;
constexpr double kQuadTol = 1e-3;

void decay_fits(Verdict& v) {
  struct Row {
    std::string name;
    double eps;
  };
  numeric::SweepSpec spec;  // [1e2, 1e4], 16 samples
  spec.lambda_min = 1e2;
  spec.lambda_max = 1e4;
  spec.samples = 16;
  spec.quadrature.tol = kQuadTol;
  const numeric::BumpFunction psi(2, 0.5);
  for (const Row& r : {Row{"x1^2x2^2", 0.5}, Row{"x1^4+x2^4", 0.5}, Row{"(x2-x1^2)^3", 1.0 / 3.0}}) {
    const auto fit = numeric::decay_fit(fixture(r.name), psi, spec);
    double worst = 0;
    bool flagged = false;
    for (const auto& s : fit.samples) {
      worst = std::max(worst, s.rel_err);
      flagged = flagged || s.flagged;
    }
    v.require(!flagged && worst < kQuadTol, r.name + " quadrature rel-err " + fmt(worst));
    v.require(std::abs(fit.epsilon_hat - r.eps) <= kEpsTol, r.name + " eps_hat " + fmt(fit.epsilon_hat));
    v.detail << r.name << " eps=" << fmt(fit.epsilon_hat);
    if (r.name == "x1^2x2^2") {
      v.require(fit.rho_hat >= 1.0 && fit.rho_hat <= 2.0, "rho_hat " + fmt(fit.rho_hat) + " outside [1, 2]");
      v.require(fit.rho_ci.lo > 0.0, "rho CI reaches 0");
      v.detail << " rho=" << fmt(fit.rho_hat) << " CI[" << fmt(fit.rho_ci.lo) << "," << fmt(fit.rho_ci.hi) << "]";
    }
    v.detail << "; ";
  }
}

// --- 4 -------------------------------------------------------------------------------
constexpr double kBracket = 4.0;
constexpr double kStderr = 0.01;

void sublevel_brackets(Verdict& v) {
  for (const auto& m : {std::vector<double>{1, 1}, std::vector<double>{2, 1}}) {
    double mlo = 1e300, mhi = 0, ilo = 1e300, ihi = 0, worst_se = 0;
    for (int e = 5; e <= 20; ++e) {
      const double delta = std::ldexp(1.0, -e);
      const auto s = numeric::sublevel_measure(m, delta);
      worst_se = std::max(worst_se, s.mc_stderr / s.mc);
      mlo = std::min(mlo, s.mc / s.envelope);
      mhi = std::max(mhi, s.mc / s.envelope);
      const auto in = numeric::sublevel_integral(m, delta);
      ilo = std::min(ilo, in.value / in.envelope);
      ihi = std::max(ihi, in.value / in.envelope);
    }
    const std::string tag = "m=(" + fmt(m[0]) + "," + fmt(m[1]) + ")";
    v.require(worst_se < kStderr, tag + " MC stderr " + fmt(worst_se));
    v.require(mhi / mlo < kBracket, tag + " measure bracket " + fmt(mhi / mlo));
    v.require(ihi / ilo < kBracket, tag + " integral bracket " + fmt(ihi / ilo));
    v.detail << tag << " measure " << fmt(mhi / mlo, 3) << " integral " << fmt(ihi / ilo, 3) << " stderr "
             << fmt(100 * worst_se, 2) << "%; ";
  }
}

// --- 5 -------------------------------------------------------------------------------
void newton_scaling(Verdict& v) {
  int checked = 0, face_checks = 0;
  for (const auto& f : testsupport::fixtures()) {
    const auto c = numeric::newton_scaling_check(f.H);
    v.require(c.passed(), f.name + " fails");
    if (f.H.dim() == 2) {
      v.require(!c.faces.empty(), f.name + " has no face checks");
      face_checks += static_cast<int>(c.faces.size());
    }
    ++checked;
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto p = testsupport::random_sparse(rng, 2 + static_cast<std::size_t>(i % 2), 2 + i % 5, 4);
    v.require(numeric::newton_scaling_check(p).polyhedron_ok, "random polynomial " + to_string(p));
    ++checked;
  }
  if (v.pass) v.detail << checked << " polynomials, " << face_checks << " exact face-order relations";
}

// --- 6 -------------------------------------------------------------------------------
void product_identity(Verdict& v) {
  std::mt19937_64 rng(6);
  int faces = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
    const auto p = testsupport::random_sparse(rng, n, 2 + i % 4, 3);
    const int r = 2 + i % 3;
    const auto q = p.pow(static_cast<unsigned>(r));
    const auto Np = build_polyhedron(p);
    v.require(scaled_polyhedron_equal(Np, build_polyhedron(q), r), "dilation fails for " + to_string(p));
    // Oracle: vertices of q are exactly r times the oracle vertices of p. (The oracle is
    // combinatorial in the term count, so it runs on p, not on the expanded q.)
    auto scaled = oracle::geometry(n, oracle::exponents(p)).vertices;
    for (auto& a : scaled) {
      std::vector<int> e(a.entries().begin(), a.entries().end());
      for (auto& x : e) x *= r;
      a = MultiIndex(e);
    }
    std::sort(scaled.begin(), scaled.end());
    v.require(build_polyhedron(q).vertices() == scaled, "vertices of q differ from r times the oracle vertices of p");
    for (const auto& F : Np.compact_faces()) {
      v.require(face_restrict(q, dilate_face(F, r)) == face_restrict(p, F).pow(static_cast<unsigned>(r)),
                "face factorization fails for " + to_string(p));
      ++faces;
    }
  }
  if (v.pass) v.detail << "20 pairs, " << faces << " face identities";
}

// --- 7 -------------------------------------------------------------------------------
constexpr double kHStarTol = 0.05;
constexpr double kPTol = 0.1;

void interpolation(Verdict& v) {
  std::set<InterpolationRegime> regimes;
  for (int dn = 1; dn <= 24; ++dn)
    for (int dd = 1; dd <= 4; ++dd)
      for (int M = 2; M <= 8; ++M) {
        const auto r = interpolation_threshold(Rational(dn, dd), M);
        regimes.insert(r.regime);
        const Rational expect = r.a.infinite() ? Rational(2) : (2 * *r.a.value + 2) / *r.a.value;
        v.require(p0_from_threshold(r.a) == expect, "p0 formula");
      }
  v.require(regimes.size() == 3, "not every regime reached");

  const auto H = fixture("x1^2x2^2");
  const auto a = analyze(H);
  const numeric::Damping W(H, {.delta = 0.0, .pair = std::nullopt, .d = a.distance.d, .M = a.zeros.M});
  const auto hs = numeric::integrability_threshold(W, numeric::WeightKind::h_star);
  v.require(hs.combined.lo >= 0.5 - kHStarTol && hs.combined.hi <= 0.5 + kHStarTol,
            "H* bracket [" + fmt(hs.combined.lo) + "," + fmt(hs.combined.hi) + "]");
  v.detail << "p0 formula exact in 3 regimes; H* on x1^2x2^2 [" << fmt(hs.combined.lo) << "," << fmt(hs.combined.hi)
           << "]; P:";
  for (const auto& f : testsupport::fixtures()) {
    if (f.H.dim() != 2) continue;
    const auto rep = analyze(f.H);
    const numeric::Damping Wf(f.H, {.delta = 0.0, .pair = std::nullopt, .d = rep.distance.d, .M = rep.zeros.M});
    const auto pe = numeric::integrability_threshold(Wf, numeric::WeightKind::damping);
    const auto it = interpolation_threshold(rep.distance.d, rep.zeros.M);
    if (it.a.infinite()) {
      v.require(pe.combined.infinite(), f.name + " P threshold finite, expected none");
      v.detail << " " << f.name << "=inf";
    } else {
      const double av = to_double(*it.a.value);
      v.require(pe.combined.lo >= av - kPTol && pe.combined.hi <= av + kPTol,
                f.name + " P bracket [" + fmt(pe.combined.lo) + "," + fmt(pe.combined.hi) + "] vs " + fmt(av));
      v.detail << " " << f.name << "=" << fmt(0.5 * (pe.combined.lo + pe.combined.hi)) << "(a=" << fmt(av) << ")";
    }
  }
}

// --- 8 -------------------------------------------------------------------------------
void degenerate_structure(Verdict& v) {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  struct Row {
    std::string name;
    RationalVector beta;  // of the face carrying every vertex
    int m;
  };
  for (const Row& r : {Row{"(x1+x2)^4", {1, 1}, 4}, Row{"x1^3", {1, 0}, 3}}) {
    const auto H = fixture(r.name);
    const auto deg = hessian_condition(H);
    v.require(!deg.hessian_condition_holds, r.name + ": Hessian condition should fail");
    v.require(deg.structural_form.has_value(), r.name + ": no structural form");
    if (!deg.structural_form) continue;
    const auto N = build_polyhedron(H);
    bool found = false;
    for (const auto& s : *deg.structural_form) {
      const auto lin = x1 * s.beta[0] + x2 * s.beta[1];
      v.require(lin.pow(static_cast<unsigned>(s.m)) * s.c == face_restrict(H, s.face), r.name + ": c(b.x)^m != f_F");
      if (s.face.vertices.size() == N.vertices().size()) {
        found = true;
        v.require(s.c == 1 && s.beta == r.beta && s.m == r.m, r.name + ": wrong (c, beta, m)");
        if (N.vertices().size() == 2)
          v.require(Rational(s.m) > newton_distance(N).d, r.name + ": m <= d in the two-vertex case");
      }
    }
    v.require(found, r.name + ": face with every vertex missing");
  }
  if (v.pass) v.detail << "(x1+x2)^4 -> (1, (1,1), 4), m=4 > d=2; x1^3 -> (1, (1,0), 3)";
}

// --- 9 -------------------------------------------------------------------------------
constexpr double kEnvelopeSpread = 10.0;
constexpr double kDominationSpread = 1e-9;

void envelope_and_domination(Verdict& v) {
  const double radius = 0.5;
  numeric::SweepSpec spec;
  const auto lambdas = numeric::sweep_lambdas(spec);
  const numeric::BumpFunction psi(2, radius);
  const char* ladder[] = {"x1^2+x2^2", "x1^2x2^2", "x1^4+x2^4", "(x2-x1^2)^2", "(x2-x1^2)^3", "x1^6+x2^6"};
  v.detail << "envelope max/min:";
  for (const char* name : ladder) {
    const auto H = fixture(name);
    const auto a = analyze(H);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double lam : lambdas) {
      const double freq[3] = {0, 0, lam};
      const double T = std::abs(numeric::oscillatory_integral(H, psi, freq).value);
      const double r = T / numeric::dyadic_envelope(a.vertices, a.zeros.M, lam, radius);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    v.detail << " " << name << "=" << fmt(hi / lo, 3);
    v.require(hi / lo < kEnvelopeSpread, std::string(name) + " envelope ratio spread " + fmt(hi / lo, 3));
  }
  v.detail << "; domination inf:";
  for (const char* name : ladder) {
    const auto H = fixture(name);
    const auto faces = build_polyhedron(H).compact_faces();
    std::vector<int> step{1, 1};
    if (faces.back().dim == 1)
      for (int i = 0; i < 2; ++i) step[i] = static_cast<int>(boost::multiprecision::numerator(faces.back().weight[i]));
    const int k0[2] = {2, 2};
    const auto t = numeric::derivative_domination(H, k0, step);
    v.detail << " " << name << "=" << fmt(t.pointwise_inf, 3);
    v.require(t.pointwise_inf > 0 && t.directional_inf > 0, std::string(name) + " domination infimum 0");
    v.require(t.pointwise_spread < kDominationSpread, std::string(name) + " domination not scale-stable");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only, known;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--known-failures", known, "criteria expected to fail; any other outcome is an error");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "exact geometry oracle", 10, geometry_oracle},
      {2, "fixture classification ladder", 1, fixture_ladder},
      {3, "decay-law reproduction", 900, decay_fits},
      {4, "sublevel brackets", 60, sublevel_brackets},
      {5, "Newton scaling of the Hessian gauge", 30, newton_scaling},
      {6, "product identity", 30, product_identity},
      {7, "interpolation consistency", 120, interpolation},
      {8, "degenerate structure", 1, degenerate_structure},
      {9, "envelope and domination shape", 300, envelope_and_domination},
  };
  std::set<int> failed;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.budget_s, "over budget");
    if (!v.pass) failed.insert(c.id);
    std::printf("criterion %d %s  %s (%.1f s of %.0f s): %s\n", c.id, v.pass ? "PASS" : "FAIL", c.title, secs, c.budget_s,
                v.text().c_str());
    std::fflush(stdout);
  }
  std::set<int> expected;
  for (int k : known)
    if (only.empty() || std::find(only.begin(), only.end(), k) != only.end()) expected.insert(k);
  return failed == expected ? 0 : 1;
}
