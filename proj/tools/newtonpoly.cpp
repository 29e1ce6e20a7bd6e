// newtonpoly: analyze | decay | sublevel | verify | report.
//
// Exit codes: 0 ok, 1 internal error, 2 input or usage error, 3 quadrature tolerance not met,
// 4 property failure or decay violation.

#include "newtonpoly/classifier.hpp"
#include "newtonpoly/io.hpp"
#include "newtonpoly/numeric/bump.hpp"
#include "newtonpoly/numeric/decay.hpp"
#include "newtonpoly/numeric/oscillatory.hpp"
#include "newtonpoly/numeric/sublevel.hpp"
#include "newtonpoly/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using npoly::io::Json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInput = 2, kTolerance = 3, kProperty = 4 };

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // first entry goes to stdout
  int exit_code = kOk;
};

struct Common {
  std::string input;
  std::optional<std::string> out;
  bool no_cache = false;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const Artifacts& a, const Common& c, const npoly::io::RunManifest& m) {
  if (!a.files.empty()) std::cout << a.files.front().second << std::flush;
  if (c.out) {
    const fs::path dir(*c.out);
    for (const auto& [name, body] : a.files) npoly::io::atomic_write(dir / name, body);
    npoly::io::atomic_write(dir / "manifest.json", dump(m.to_json()));
  }
}

// Runs `work` unless the cache already holds this manifest; the stored status replays the exit code.
template <class F>
int cached(const Common& c, const npoly::io::RunManifest& m, F&& work) {
  const npoly::io::Cache cache(npoly::io::cache_dir());
  if (!c.no_cache) {
    if (auto hit = cache.lookup(m)) {
      try {
        const Json status = Json::parse(npoly::io::read_file(*hit / "status.json"));
        Artifacts a;
        for (const auto& name : status.at("files")) a.files.emplace_back(name, npoly::io::read_file(*hit / std::string(name)));
        a.exit_code = status.at("exit_code");
        emit(a, c, m);
        return a.exit_code;
      } catch (const std::exception&) {
        // Unreadable entry: recompute and overwrite.
      }
    }
  }
  Artifacts a = work();
  emit(a, c, m);
  if (!c.no_cache) {
    Json names = Json::array();
    for (const auto& f : a.files) names.push_back(f.first);
    auto files = a.files;
    files.emplace_back("status.json", dump({{"exit_code", a.exit_code}, {"files", names}}));
    try {
      cache.store(m, files);
    } catch (const std::exception& e) {
      std::cerr << "warning: cache write failed: " << e.what() << "\n";
    }
  }
  return a.exit_code;
}

npoly::io::RunManifest manifest(const std::string& command, const std::string& input_hash, Json params) {
  npoly::io::RunManifest m;
  m.command = command;
  m.input_hash = input_hash;
  m.parameters = std::move(params);
  return m;
}

struct Loaded {
  npoly::io::PolynomialInput poly;
  std::string hash;  // of the canonical form, so formatting changes do not miss the cache
};

Loaded load(const std::string& path) {
  Loaded l{npoly::io::load_polynomial(path), {}};
  l.hash = npoly::io::sha256_hex(npoly::io::polynomial_to_json(l.poly.g, l.poly.base_point).dump());
  return l;
}

struct AnalyzeFlags {
  std::optional<std::string> override_m;
  bool y_off_tangent = false;
  bool factorization = false;
};

npoly::AnalysisOptions analysis_options(const AnalyzeFlags& f, Json& params) {
  npoly::AnalysisOptions o;
  o.y_not_in_tangent_plane = f.y_off_tangent;
  o.factorization_hypothesis = f.factorization;
  params["y_not_in_tangent_plane"] = f.y_off_tangent;
  params["factorization_hypothesis"] = f.factorization;
  if (f.override_m) {
    o.override_m = npoly::io::load_override(*f.override_m);
    params["override_m"] = {{"m", o.override_m->m}, {"justification", o.override_m->justification}};
  }
  return o;
}

Json notes_json(const npoly::io::PolynomialInput& p) {
  Json j = Json::array();
  for (const auto& s : p.notes) j.push_back(s);
  return j;
}

int cmd_analyze(const Common& c, const AnalyzeFlags& f) {
  const auto in = load(c.input);
  Json params = Json::object();
  const auto opt = analysis_options(f, params);
  return cached(c, manifest("analyze", in.hash, params), [&] {
    Json r = npoly::io::report_to_json(npoly::analyze(in.poly.H, opt));
    if (!in.poly.notes.empty()) r["input_notes"] = notes_json(in.poly);
    return Artifacts{{{"report.json", dump(r)}}, kOk};
  });
}

struct DecayFlags {
  npoly::numeric::SweepSpec sweep;
  double bump_radius = 0.5;
  bool force = false;
};

Json sweep_json(const npoly::numeric::SweepSpec& s, double radius) {
  return {{"lambda_min", s.lambda_min}, {"lambda_max", s.lambda_max}, {"samples", s.samples},
          {"tol", s.quadrature.tol},    {"seed", s.seed},             {"bootstrap", s.bootstrap},
          {"bump_radius", radius},      {"max_doublings", s.quadrature.max_doublings}};
}

// Exponent within 0.05 of the prediction and log power inside the predicted range widened by 1/2.
std::string verdict(const npoly::numeric::DecayFit& fit, const npoly::FourierPrediction& p) {
  const double eps = npoly::to_double(p.epsilon);
  const double hi = p.log_power;
  const double lo = p.lower_bound_log_power.value_or(p.log_power);
  if (fit.epsilon_hat < eps - 0.05 || fit.rho_hat > hi + 0.5) return "violation";
  if (std::abs(fit.epsilon_hat - eps) <= 0.05 && fit.rho_hat >= lo - 0.5) return "consistent";
  return "bound-respected-not-sharp";
}

int cmd_decay(const Common& c, const DecayFlags& f) {
  const auto in = load(c.input);
  const std::size_t n = in.poly.H.dim();
  if (n > 2 && !f.force) throw npoly::io::InputError("decay sweeps in n > 2 are expensive; pass --force");
  if (!(f.sweep.lambda_max > f.sweep.lambda_min)) throw npoly::io::InputError("--lambda-max must exceed --lambda-min");
  if (!(f.bump_radius > 0)) throw npoly::io::InputError("--bump-radius must be positive");
  const Json params = sweep_json(f.sweep, f.bump_radius);
  return cached(c, manifest("decay", in.hash, params), [&] {
    const auto report = npoly::analyze(in.poly.H);
    const npoly::numeric::BumpFunction psi(n, f.bump_radius);
    const auto samples = npoly::numeric::sweep_samples(in.poly.H, psi, f.sweep);
    std::size_t flagged = 0;
    for (const auto& s : samples) flagged += s.flagged;
    const std::string csv = npoly::io::decay_csv(samples);
    Json prediction = {{"epsilon", npoly::to_string(report.fourier.epsilon)},
                       {"log_power", report.fourier.log_power},
                       {"case", npoly::to_string(report.fourier.case_label)}};
    if (report.fourier.lower_bound_log_power) prediction["lower_log_power"] = *report.fourier.lower_bound_log_power;
    Json summary = {{"schema", npoly::io::kDecaySchema},
                    {"artifact_version", npoly::io::kArtifactVersion},
                    {"parameters", params},
                    {"prediction", prediction},
                    {"flagged_samples", flagged}};
    if (flagged > 0) {
      // Partial results: the CSV keeps every sample with its flag, no fit is attempted.
      summary["fit"] = nullptr;
      summary["verdict"] = nullptr;
      summary["error"] = "quadrature tolerance not met on " + std::to_string(flagged) + " samples";
      return Artifacts{{{"decay.json", dump(summary)}, {"decay.csv", csv}}, kTolerance};
    }
    const auto fit = npoly::numeric::fit_decay_samples(samples, f.sweep);
    summary["fit"] = {{"epsilon_hat", fit.epsilon_hat},
                      {"rho_hat", fit.rho_hat},
                      {"epsilon_ci", {fit.epsilon_ci.lo, fit.epsilon_ci.hi}},
                      {"rho_ci", {fit.rho_ci.lo, fit.rho_ci.hi}},
                      {"power_only_epsilon", fit.power_only_epsilon},
                      {"residual_rms", fit.residual_rms},
                      {"window", {fit.fit_lambda_min, fit.fit_lambda_max}},
                      {"curvature_flag", fit.curvature_flag}};
    const std::string v = verdict(fit, report.fourier);
    summary["verdict"] = v;
    return Artifacts{{{"decay.json", dump(summary)}, {"decay.csv", csv}}, v == "violation" ? kProperty : kOk};
  });
}

struct SublevelFlags {
  std::vector<double> m;
  std::vector<double> deltas;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
};

int cmd_sublevel(const SublevelFlags& f, const Common& c) {
  if (f.m.empty()) throw npoly::io::InputError("--m needs at least one exponent");
  for (double d : f.deltas)
    if (!(d > 0 && d < 1)) throw npoly::io::InputError("every --delta must lie in (0, 1)");
  const Json params = {{"m", f.m}, {"delta", f.deltas}, {"samples", f.samples}, {"seed", f.seed}};
  return cached(c, manifest("sublevel", "", params), [&] {
    std::string csv =
        "delta,closed_form,mc,mc_stderr,measure_envelope,measure_ratio,integral,integral_abs_err,integral_envelope,"
        "integral_ratio,regime\n";
    using npoly::io::format_double;
    for (double d : f.deltas) {
      const auto s = npoly::numeric::sublevel_measure(f.m, d, {.samples = f.samples, .seed = f.seed});
      const auto in = npoly::numeric::sublevel_integral(f.m, d);
      const double meas = s.closed_form.value_or(s.mc);
      csv += format_double(d) + "," + (s.closed_form ? format_double(*s.closed_form) : std::string()) + "," +
             format_double(s.mc) + "," + format_double(s.mc_stderr) + "," + format_double(s.envelope) + "," +
             format_double(meas / s.envelope) + "," + format_double(in.value) + "," + format_double(in.abs_err) + "," +
             format_double(in.envelope) + "," + format_double(in.value / in.envelope) + "," + std::string(1, in.regime) +
             "\n";
    }
    return Artifacts{{{"sublevel.csv", csv}}, kOk};
  });
}

struct VerifyFlags {
  npoly::verify::VerifyOptions opt;
  AnalyzeFlags analyze;
};

int cmd_verify(const Common& c, VerifyFlags f) {
  const auto in = load(c.input);
  Json params = sweep_json(f.opt.sweep, f.opt.bump_radius);
  params["delta"] = f.opt.delta;
  params["seed"] = f.opt.seed;
  params["numeric"] = f.opt.numeric;
  const auto aopt = analysis_options(f.analyze, params);
  f.opt.sweep.seed = f.opt.seed;
  return cached(c, manifest("verify", in.hash, params), [&] {
    const auto report = npoly::analyze(in.poly.H, aopt);
    auto v = npoly::verify::run_suite(in.poly.H, report, f.opt).to_json();
    v["artifact_version"] = npoly::io::kArtifactVersion;
    return Artifacts{{{"verify.json", dump(v)}}, v["passed"].get<bool>() ? kOk : kProperty};
  });
}

int cmd_report(const std::optional<std::string>& out) {
  const npoly::io::Cache cache(npoly::io::cache_dir());
  const std::string body = dump(cache.bundle());
  if (out)
    npoly::io::atomic_write(*out, body);
  else
    std::cout << body;
  return kOk;
}

void sweep_flags(CLI::App* app, npoly::numeric::SweepSpec& s, double& radius) {
  app->add_option("--lambda-min", s.lambda_min, "smallest lambda of the sweep")->capture_default_str();
  app->add_option("--lambda-max", s.lambda_max, "largest lambda of the sweep")->capture_default_str();
  app->add_option("--samples", s.samples, "geometric sweep size")->capture_default_str();
  app->add_option("--tol", s.quadrature.tol, "per-sample relative quadrature tolerance")->capture_default_str();
  app->add_option("--bump-radius", radius, "cutoff support radius")->capture_default_str();
  app->add_option("--max-doublings", s.quadrature.max_doublings, "quadrature refinement steps before giving up")
      ->capture_default_str()
      ->check(CLI::Range(0, 8));
}

void analyze_flags(CLI::App* app, AnalyzeFlags& f) {
  app->add_option("--override-m", f.override_m, "JSON file {\"m_override\": int, \"justification\": str}")->check(CLI::ExistingFile);
  app->add_flag("--y-not-in-tangent-plane", f.y_off_tangent, "assert the base point is off its tangent plane");
  app->add_flag("--factorization-hypothesis", f.factorization, "assert the unboundedness hypothesis below m");
}

void common_flags(CLI::App* app, Common& c, bool input) {
  if (input) app->add_option("input", c.input, "polynomial JSON file")->required()->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "also write every artifact into DIR");
  app->add_flag("--no-cache", c.no_cache, "neither read nor write the run cache");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton polyhedra, decay laws and maximal-operator thresholds for polynomial surfaces"};
  app.require_subcommand(1);

  Common common;
  AnalyzeFlags aflags;
  auto* analyze = app.add_subcommand("analyze", "geometry, zero orders and classification report");
  common_flags(analyze, common, true);
  analyze_flags(analyze, aflags);

  DecayFlags dflags;
  auto* decay = app.add_subcommand("decay", "quadrature sweep and decay fit against the prediction");
  common_flags(decay, common, true);
  sweep_flags(decay, dflags.sweep, dflags.bump_radius);
  decay->add_option("--seed", dflags.sweep.seed, "bootstrap seed")->capture_default_str();
  decay->add_flag("--force", dflags.force, "allow n > 2");

  SublevelFlags sflags;
  auto* sublevel = app.add_subcommand("sublevel", "monomial sublevel measures and integrals against their envelopes");
  common_flags(sublevel, common, false);
  sublevel->add_option("--m", sflags.m, "exponent vector")->required()->expected(1, 16);
  sublevel->add_option("--delta", sflags.deltas, "delta values in (0, 1)")->required()->expected(1, 256);
  sublevel->add_option("--samples", sflags.samples, "Monte Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  sublevel->add_option("--seed", sflags.seed, "Monte Carlo seed")->capture_default_str();

  VerifyFlags vflags;
  bool exact_only = false;
  auto* verify = app.add_subcommand("verify", "property suite; exit 4 if any property fails");
  common_flags(verify, common, true);
  analyze_flags(verify, vflags.analyze);
  sweep_flags(verify, vflags.opt.sweep, vflags.opt.bump_radius);
  verify->add_option("--seed", vflags.opt.seed, "seed for random corpora and sampling")->capture_default_str();
  verify->add_option("--delta", vflags.opt.delta, "damping exponent on the direction-pair determinant")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--exact-only", exact_only, "skip the numeric properties");

  std::optional<std::string> report_out;
  auto* report = app.add_subcommand("report", "bundle every cached run of this version into one document");
  report->add_option("--out", report_out, "write the bundle to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*analyze) return cmd_analyze(common, aflags);
    if (*decay) return cmd_decay(common, dflags);
    if (*sublevel) return cmd_sublevel(sflags, common);
    if (*verify) {
      vflags.opt.numeric = !exact_only;
      return cmd_verify(common, vflags);
    }
    if (*report) return cmd_report(report_out);
  } catch (const npoly::io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const npoly::EmptyNewtonPolyhedron& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const npoly::UnclassifiableInput& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const npoly::numeric::ToleranceNotMet& e) {
    std::cerr << "tolerance not met: " << e.what() << "\n";
    return kTolerance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
