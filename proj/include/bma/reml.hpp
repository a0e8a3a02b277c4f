#pragma once

#include "bma/meta.hpp"

namespace bma {

struct RemlFit {
  double delta_hat;
  double tau_hat;
  /// sqrt(1 / sum w_i) with w_i = 1 / (se_i^2 + tau_hat^2).
  double se_delta;
  bool converged;
  int iterations;
  double restricted_loglik;
};

/// Restricted log likelihood of tau, up to an additive constant:
/// -1/2 sum log(se_i^2 + tau^2) - 1/2 log sum w_i - 1/2 sum w_i (y_i - mu(tau))^2.
double restricted_loglik(double tau, const Comparison& comparison);

/// Search bound for tau: 10 * max |y_i - median(y)| + max se_i.
double reml_tau_max(const Comparison& comparison);

/// Random-effects fit with tau chosen to maximise the restricted likelihood
/// on [0, reml_tau_max]. Throws InsufficientDataError for fewer than two studies.
RemlFit reml_fit(const Comparison& comparison);

}  // namespace bma
