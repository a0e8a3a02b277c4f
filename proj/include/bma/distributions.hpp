#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bma {

enum class Family { PointMass, Uniform, Normal, HalfNormal, Cauchy, StudentT, Gamma, InverseGamma };

std::string_view family_name(Family family);

/// Closed interval carrying the support of a distribution; bounds may be infinite.
struct Interval {
  double lower;
  double upper;
};

/// A prior over one scalar parameter. Gamma and InverseGamma use shape/scale,
/// StudentT uses location/scale/df. Instances are validated on construction.
class PriorSpec {
 public:
  static PriorSpec point_mass(double value);
  static PriorSpec uniform(double lower, double upper);
  static PriorSpec normal(double mean, double sd);
  static PriorSpec half_normal(double sd);
  static PriorSpec cauchy(double location, double scale);
  static PriorSpec student_t(double location, double scale, double df);
  static PriorSpec gamma(double shape, double scale);
  static PriorSpec inverse_gamma(double shape, double scale);

  /// Builds from a family and its parameter list, validating both.
  static PriorSpec make(Family family, std::span<const double> params);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return {params_.data(), param_count(family_)}; }
  double param(std::size_t i) const;
  bool is_point_mass() const noexcept { return family_ == Family::PointMass; }
  Interval support() const noexcept;

  static std::size_t param_count(Family family) noexcept;

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

 private:
  PriorSpec(Family family, std::array<double, 3> params) : family_(family), params_(params) {}

  Family family_;
  std::array<double, 3> params_;
};

// Density and distribution functions. All throw UnsupportedOperationError where
// a point mass has no meaningful answer.
double log_pdf(const PriorSpec& spec, double x);
double cdf(const PriorSpec& spec, double x);
double quantile(const PriorSpec& spec, double p);
double mean(const PriorSpec& spec);

std::vector<double> sample(const PriorSpec& spec, std::mt19937_64& rng, std::size_t n);

struct FitOptions {
  // Fix the location of Normal and StudentT fits at zero.
  bool zero_location = true;
  int restarts = 3;
  double tolerance = 1e-8;
};

/// Maximum-likelihood fit of a family to data. Supported families: Normal,
/// StudentT, HalfNormal, Gamma, InverseGamma.
PriorSpec fit_mle(Family family, std::span<const double> data, const FitOptions& options = {});

/// Sum of log densities; the objective maximised by fit_mle.
double log_likelihood(const PriorSpec& spec, std::span<const double> data);

/// Canonical text form, e.g. "t(0,0.51,5)"; parse_prior(to_string(s)) == s.
std::string to_string(const PriorSpec& spec);

/// Parses `t(location,scale,df)`, `normal(mean,sd)`, `cauchy(location,scale)`,
/// `halfnormal(sd)`, `gamma(shape,scale)`, `invgamma(shape,scale)`,
/// `uniform(lower,upper)` and `point(value)`. Case-insensitive.
PriorSpec parse_prior(std::string_view text);

}  // namespace bma
