#include "bma/reml.hpp"

#include "bma/error.hpp"
#include "bma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bma {

namespace {
constexpr int kScanPoints = 200;
constexpr double kTauTolerance = 1e-9;
// Derivative of the restricted log likelihood with respect to tau^2.
double reml_score(double tau, const Comparison& c) {
  const WeightedSummary ws = weighted_summary(tau, c);
  double sw2 = 0.0, sw2r = 0.0;
  for (const Study& s : c.studies) {
    const double w = 1.0 / (s.se * s.se + tau * tau);
    const double r = s.effect - ws.mean;
    sw2 += w * w;
    sw2r += w * w * r * r;
  }
  return 0.5 * (sw2r - ws.precision + sw2 / ws.precision);
}

// Golden section stops once the bracket is narrow, but the objective is flat
// there to rounding, so its answer is only good to ~1e-8. The score is not
// flat: find its sign change around x within [lo, hi] and bisect it.
std::vector<double> polish_candidates(double x, double lo, double hi, const Comparison& c) {
  std::vector<double> out;
  if (lo == 0.0 && reml_score(0.0, c) <= 0.0) out.push_back(0.0);
  double a = x, b = x;
  for (double step = 1e-10; step <= hi - lo; step *= 2.0) {
    if (reml_score(a, c) <= 0.0) a = std::max(lo, x - step);
    if (reml_score(b, c) >= 0.0) b = std::min(hi, x + step);
    if (reml_score(a, c) > 0.0 && reml_score(b, c) < 0.0) break;
  }
  if (reml_score(a, c) > 0.0 && reml_score(b, c) < 0.0) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (reml_score(mid, c) > 0.0 ? a : b) = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace

double restricted_loglik(double tau, const Comparison& comparison) {
  const WeightedSummary ws = weighted_summary(tau, comparison);
  const double tau2 = tau * tau;
  double log_var = 0.0, q = 0.0;
  for (const Study& s : comparison.studies) {
    const double var = s.se * s.se + tau2;
    log_var += std::log(var);
    q += (s.effect - ws.mean) * (s.effect - ws.mean) / var;
  }
  return -0.5 * log_var - 0.5 * std::log(ws.precision) - 0.5 * q;
}

double reml_tau_max(const Comparison& comparison) {
  std::vector<double> ys;
  double max_se = 0.0;
  for (const Study& s : comparison.studies) {
    ys.push_back(s.effect);
    max_se = std::max(max_se, s.se);
  }
  std::sort(ys.begin(), ys.end());
  const std::size_t n = ys.size();
  const double med = n % 2 ? ys[n / 2] : 0.5 * (ys[n / 2 - 1] + ys[n / 2]);
  double spread = 0.0;
  for (double y : ys) spread = std::max(spread, std::abs(y - med));
  return 10.0 * spread + max_se;
}

RemlFit reml_fit(const Comparison& comparison) {
  if (comparison.size() < 2) throw InsufficientDataError("reml_fit: at least two studies are required");
  validate(comparison);

  const double tau_max = reml_tau_max(comparison);
  auto objective = [&](double tau) { return restricted_loglik(tau, comparison); };

  // Coarse scan brackets the global maximum; golden section refines it.
  std::size_t best = 0;
  double best_value = -HUGE_VAL;
  std::vector<double> taus(kScanPoints + 1);
  for (int j = 0; j <= kScanPoints; ++j) {
    taus[j] = tau_max * j / kScanPoints;
    const double v = objective(taus[j]);
    if (v > best_value) {
      best_value = v;
      best = static_cast<std::size_t>(j);
    }
  }
  const double lo = taus[best == 0 ? 0 : best - 1];
  const double hi = taus[std::min<std::size_t>(best + 1, kScanPoints)];
  ScalarOptimum opt = golden_section_maximize(objective, lo, hi, kTauTolerance);
  double tau = opt.x;
  double value = opt.value;
  if (best_value > value) {
    tau = taus[best];
    value = best_value;
  }
  // Candidates are compared with a rounding allowance so that a polished
  // point always replaces the golden-section one it refines.
  const double golden_value = value;
  bool polished = false;
  for (double cand : polish_candidates(tau, lo, hi, comparison)) {
    const double v = objective(cand);
    if (v >= golden_value - 1e-12 && (!polished || v > value)) {
      tau = cand;
      value = v;
      polished = true;
    }
  }

  const WeightedSummary ws = weighted_summary(tau, comparison);
  return {ws.mean, tau, std::sqrt(1.0 / ws.precision), opt.converged, opt.iterations, value};
}

}  // namespace bma
