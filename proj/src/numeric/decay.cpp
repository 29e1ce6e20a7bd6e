#include "newtonpoly/numeric/decay.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace npoly::numeric {

namespace {

struct Joint {
  double c = 0, eps = 0, rho = 0, rms = 0;
};

Joint joint_fit(const std::vector<double>& L, const std::vector<double>& y, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(idx.size()), 3);
  Eigen::VectorXd Y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    X(i, 0) = 1.0;
    X(i, 1) = L[idx[r]];
    X(i, 2) = std::log(L[idx[r]]);
    Y(i) = y[idx[r]];
  }
  const Eigen::Vector3d b = X.colPivHouseholderQr().solve(Y);
  Joint j{b(0), -b(1), b(2), 0.0};
  j.rms = std::sqrt((X * b - Y).squaredNorm() / static_cast<double>(idx.size()));
  return j;
}

double power_fit(const std::vector<double>& L, const std::vector<double>& y, const std::vector<std::size_t>& idx) {
  double mL = 0, my = 0;
  for (auto i : idx) {
    mL += L[i];
    my += y[i];
  }
  mL /= static_cast<double>(idx.size());
  my /= static_cast<double>(idx.size());
  double sxy = 0, sxx = 0;
  for (auto i : idx) {
    sxy += (L[i] - mL) * (y[i] - my);
    sxx += (L[i] - mL) * (L[i] - mL);
  }
  return -sxy / sxx;
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<double> sweep_lambdas(const SweepSpec& spec) {
  if (spec.samples < 12) throw std::invalid_argument("a decay sweep needs at least 12 samples");
  if (!(spec.lambda_min > 1) || spec.lambda_max < 100 * spec.lambda_min)
    throw std::invalid_argument("a decay sweep needs lambda_min > 1 and at least two decades");
  std::vector<double> out;
  const double ratio = spec.lambda_max / spec.lambda_min;
  for (int j = 0; j < spec.samples; ++j)
    out.push_back(j + 1 == spec.samples ? spec.lambda_max
                                        : spec.lambda_min * std::pow(ratio, j / (spec.samples - 1.0)));
  return out;
}

std::vector<DecaySample> sweep_samples(const TaylorPoly& H, const BumpFunction& psi, const SweepSpec& spec) {
  const std::size_t n = H.dim();
  std::vector<DecaySample> samples;
  for (double lam : sweep_lambdas(spec)) {
    std::vector<double> freq(n + 1, 0.0);
    freq[n] = lam;
    DecaySample s;
    s.lambda = lam;
    try {
      const auto r = oscillatory_integral(H, psi, freq, spec.quadrature);
      s.T = r.value;
      s.abs_err = r.abs_err;
      s.rel_err = r.rel_err;
    } catch (const ToleranceNotMet& e) {
      s.T = e.best.value;
      s.abs_err = e.best.abs_err;
      s.rel_err = e.best.rel_err;
      s.flagged = true;
    }
    samples.push_back(s);
  }
  return samples;
}

DecayFit decay_fit(const TaylorPoly& H, const BumpFunction& psi, const SweepSpec& spec) {
  return fit_decay_samples(sweep_samples(H, psi, spec), spec);
}

DecayFit fit_decay_samples(std::vector<DecaySample> samples, const SweepSpec& spec) {
  DecayFit fit;
  fit.seed = spec.seed;
  fit.bootstrap = spec.bootstrap;
  std::vector<double> L, y;
  for (const auto& s : samples) {
    L.push_back(std::log(s.lambda));
    y.push_back(std::log(std::abs(s.T)));
  }
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!samples[i].flagged && std::abs(samples[i].T) > 0 && samples[i].lambda > 1) window.push_back(i);
  if (window.size() < 4) throw std::invalid_argument("fewer than four usable samples for the decay fit");

  Joint j = joint_fit(L, y, window);
  if (j.rms > spec.curvature_rms) {
    const double cut = 10.0 * samples[window.front()].lambda;
    std::vector<std::size_t> upper;
    for (auto i : window)
      if (samples[i].lambda >= cut * (1 - 1e-12)) upper.push_back(i);
    if (upper.size() >= 6) {
      window = std::move(upper);
      j = joint_fit(L, y, window);
      fit.curvature_flag = true;
    }
  }
  fit.epsilon_hat = j.eps;
  fit.rho_hat = j.rho;
  fit.intercept = j.c;
  fit.residual_rms = j.rms;
  fit.power_only_epsilon = power_fit(L, y, window);
  fit.fit_lambda_min = samples[window.front()].lambda;
  fit.fit_lambda_max = samples[window.back()].lambda;
  fit.fit_count = window.size();

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick(0, window.size() - 1);
  std::vector<double> rhos, epss;
  for (int b = 0; b < spec.bootstrap; ++b) {
    std::vector<std::size_t> idx;
    std::set<std::size_t> distinct;
    for (std::size_t k = 0; k < window.size(); ++k) {
      idx.push_back(window[pick(rng)]);
      distinct.insert(idx.back());
    }
    if (distinct.size() < 4) continue;
    const Joint r = joint_fit(L, y, idx);
    rhos.push_back(r.rho);
    epss.push_back(r.eps);
  }
  if (!rhos.empty()) {
    fit.rho_ci = {percentile(rhos, 0.025), percentile(rhos, 0.975)};
    fit.epsilon_ci = {percentile(epss, 0.025), percentile(epss, 0.975)};
  }
  fit.samples = std::move(samples);
  return fit;
}

}  // namespace npoly::numeric
