#pragma once

#include "bma/distributions.hpp"
#include "bma/meta.hpp"
#include "bma/quadrature.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bma {

/// One meta-analytic model: a prior on the mean effect delta and one on the
/// heterogeneity tau. A point mass collapses that dimension; PointMass(0) on
/// both gives the fixed-effect null.
struct ModelSpec {
  PriorSpec delta_prior;
  PriorSpec tau_prior;
  std::string name;
};

enum class ModelType { FixedNull, FixedAlternative, RandomNull, RandomAlternative };

std::string_view model_type_name(ModelType type);
ModelType model_type(const ModelSpec& model) noexcept;
bool delta_free(const ModelSpec& model) noexcept;
bool tau_free(const ModelSpec& model) noexcept;

/// Throws ParameterDomainError when the tau prior puts mass below zero.
void validate(const ModelSpec& model);

enum class Parameter { Delta, Tau };

struct MarginalOptions {
  QuadratureOptions outer{1e-9, 4000};
  QuadratureOptions inner{1e-10, 4000};
  /// Prior mass left outside each integration range, per tail.
  double tail_mass = 1e-7;
  std::size_t grid_points = 2048;
  double grid_normalization_tol = 1e-6;
};

/// log of the marginal likelihood p(y | model): the likelihood integrated
/// against the delta and tau priors, with point-mass dimensions collapsed.
double log_marginal(const ModelSpec& model, const Comparison& comparison, const MarginalOptions& options = {});

struct GridPoint {
  double value;
  double density;
};

/// An atom of posterior probability at a single parameter value.
struct PointMassComponent {
  double location;
  double probability;
};

struct PosteriorSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  /// Continuous part of the posterior on a (possibly non-uniform) grid,
  /// normalised to integrate to one by the trapezoidal rule.
  std::vector<GridPoint> grid;
  std::optional<PointMassComponent> atom;
};

/// Grid-based marginal posterior of one free parameter under `model`.
PosteriorSummary posterior_summary(const ModelSpec& model, const Comparison& comparison, Parameter parameter,
                                   const MarginalOptions& options = {});

/// Summary statistics of a gridded density, which need not be normalised.
PosteriorSummary summarize_grid(std::vector<GridPoint> grid);

/// Mixture of gridded posteriors with the given weights (renormalised to sum
/// to one). An optional atom carries extra probability at a point.
PosteriorSummary mixture_summary(std::span<const PosteriorSummary* const> components, std::span<const double> weights,
                                 std::optional<PointMassComponent> atom = std::nullopt);

}  // namespace bma
