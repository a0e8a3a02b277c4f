#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bma {

/// Two-arm summary statistics for a continuous outcome.
struct RawSummary {
  double n1;
  double mean1;
  double sd1;
  double n2;
  double mean2;
  double sd2;
};

/// One study: observed standardized mean difference and its standard error.
/// Non-estimable studies carry a NaN effect or se.
struct Study {
  double effect = 0.0;
  double se = 1.0;
  std::string label;
  std::optional<RawSummary> raw;

  bool estimable() const noexcept;
};

/// The unit of meta-analysis: an ordered set of studies.
struct Comparison {
  std::string id;
  std::vector<Study> studies;
  std::optional<std::string> subfield;

  std::size_t size() const noexcept { return studies.size(); }
  bool estimable() const noexcept;
  /// Comparison holding the studies at `indices`, in that order.
  Comparison subset(std::span<const std::size_t> indices) const;
};

/// Builds a comparison from parallel effect and se arrays.
Comparison make_comparison(std::span<const double> effects, std::span<const double> ses, std::string id = {});

struct EffectSize {
  double effect;
  double se;
};

/// Cohen's d with the pooled within-group SD and the large-sample variance
/// (n1+n2)/(n1 n2) + d^2 / (2 (n1+n2)). No small-sample correction.
EffectSize smd_from_raw(const RawSummary& raw);

/// Throws NumericDomainError unless every study has a finite effect and a
/// finite positive se, and the comparison is non-empty.
void validate(const Comparison& comparison);

/// Sum over studies of log N(y_i; delta, se_i).
double loglik_fixed(double delta, const Comparison& comparison);

/// Sum over studies of log N(y_i; delta, sqrt(se_i^2 + tau^2)); the study-level
/// effects are integrated out analytically.
double loglik_random(double delta, double tau, const Comparison& comparison);

/// Inverse-variance weighted summary at heterogeneity tau. The random-effects
/// log likelihood is exactly `log_const - 0.5 * precision * (delta - mean)^2`.
struct WeightedSummary {
  double mean;
  double precision;  // sum of weights 1 / (se_i^2 + tau^2)
  double log_const;  // log likelihood at delta = mean
};

WeightedSummary weighted_summary(double tau, const Comparison& comparison);

}  // namespace bma
