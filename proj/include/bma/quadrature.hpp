#pragma once

#include <functional>
#include <span>

namespace bma {

struct QuadratureOptions {
  /// Relative tolerance on the integral, i.e. absolute tolerance on its log.
  double rel_tol = 1e-9;
  int max_intervals = 4000;
};

struct LogIntegral {
  double log_value;
  /// Estimated relative error of exp(log_value).
  double rel_error;
  int evaluations;
};

/// Location and width of the dominant peak of exp(log_f) on [lower, upper].
struct Peak {
  double mode;
  double log_max;
  /// Curvature-based width: 1/sqrt(-d2 log_f) at the mode, or a bracket-based
  /// fallback when the mode sits on a boundary.
  double scale;
};

/// Scans `hints` plus a coarse uniform grid, then refines the best point by
/// golden-section search. Returns log_max = -inf when log_f is -inf everywhere probed.
Peak locate_peak(const std::function<double(double)>& log_f, double lower, double upper,
                 std::span<const double> hints);

/// log of the integral of exp(log_f) over the finite interval [lower, upper].
///
/// The integrand is shifted by its peak value so that densities far below
/// double range still integrate. The interval is pre-split at the hints and
/// at geometric offsets around the located peak, then refined by globally
/// adaptive 15-point Gauss-Kronrod quadrature. Throws ConvergenceError when
/// `max_intervals` is exhausted.
LogIntegral integrate_log(const std::function<double(double)>& log_f, double lower, double upper,
                          std::span<const double> hints, const QuadratureOptions& options = {});

/// Numerically stable log(sum(exp(values))).
double log_sum_exp(std::span<const double> values);

}  // namespace bma
