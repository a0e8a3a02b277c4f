#include "bma/marginal.hpp"

#include "bma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Probabilities at which prior quantiles seed the quadrature partition.
constexpr double kHintProbabilities[] = {1e-5, 1e-3, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999, 1 - 1e-5};

// Likelihood half-width, in likelihood standard deviations, always covered by
// the delta integration range.
constexpr double kLikelihoodHalfWidth = 40.0;

// A grid is extended until the log density falls this far below its peak.
constexpr double kGridLogDrop = 30.0;

bool bounded(const PriorSpec& spec) {
  const Interval s = spec.support();
  return std::isfinite(s.lower) && std::isfinite(s.upper);
}

std::vector<double> prior_hints(const PriorSpec& spec) {
  std::vector<double> out;
  if (spec.is_point_mass()) return out;
  for (double p : kHintProbabilities) out.push_back(quantile(spec, p));
  return out;
}

// Studies in a fixed order so that results do not depend on input order,
// down to rounding.
Comparison canonical(const Comparison& c) {
  validate(c);
  Comparison out = c;
  std::sort(out.studies.begin(), out.studies.end(), [](const Study& a, const Study& b) {
    return a.effect != b.effect ? a.effect < b.effect : a.se < b.se;
  });
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Evaluates the likelihood-times-prior integrals for one model and comparison.
class ModelIntegrator {
 public:
  ModelIntegrator(const ModelSpec& model, const Comparison& comparison, const MarginalOptions& options)
      : model_(model), comparison_(canonical(comparison)), options_(options) {
    validate(model_);
    delta_hints_ = prior_hints(model_.delta_prior);
    tau_hints_ = prior_hints(model_.tau_prior);

    std::vector<double> ys;
    double max_se = 0.0;
    for (const Study& s : comparison_.studies) {
      ys.push_back(s.effect);
      max_se = std::max(max_se, s.se);
    }
    const double med = median_of(ys);
    double spread = 0.0;
    for (double y : ys) spread = std::max(spread, std::abs(y - med));
    tau_extent_ = 10.0 * spread + max_se;

    if (tau_free(model_)) {
      const PriorSpec& h = model_.tau_prior;
      const Interval s = h.support();
      tau_range_.lower = std::max(0.0, s.lower);
      tau_range_.upper = bounded(h) ? s.upper : std::max(quantile(h, 1.0 - options_.tail_mass), tau_extent_);
      for (double t : {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0}) tau_hints_.push_back(t);
    }
  }

  bool delta_is_free() const { return delta_free(model_); }
  bool tau_is_free() const { return tau_free(model_); }

  Interval delta_range(double tau) const {
    const PriorSpec& g = model_.delta_prior;
    if (bounded(g)) return g.support();
    const WeightedSummary ws = weighted_summary(tau, comparison_);
    const double half = kLikelihoodHalfWidth / std::sqrt(ws.precision);
    const Interval s = g.support();
    double lo = std::min(quantile(g, options_.tail_mass), ws.mean - half);
    double hi = std::max(quantile(g, 1.0 - options_.tail_mass), ws.mean + half);
    return {std::max(lo, s.lower), std::min(hi, s.upper)};
  }

  Interval tau_range() const { return tau_range_; }

  /// log of the integral over delta of likelihood(delta, tau) * g(delta).
  double log_delta_integral(double tau) const {
    const WeightedSummary ws = weighted_summary(tau, comparison_);
    if (!delta_is_free()) {
      const double d = model_.delta_prior.param(0) - ws.mean;
      return ws.log_const - 0.5 * ws.precision * d * d;
    }
    const double sd = 1.0 / std::sqrt(ws.precision);
    std::vector<double> hints = delta_hints_;
    for (double m : {-3.0, -1.0, 0.0, 1.0, 3.0}) hints.push_back(ws.mean + m * sd);
    const Interval r = delta_range(tau);
    const PriorSpec& g = model_.delta_prior;
    auto log_f = [&](double delta) {
      const double d = delta - ws.mean;
      return -0.5 * ws.precision * d * d + log_pdf(g, delta);
    };
    return ws.log_const + integrate_log(log_f, r.lower, r.upper, hints, options_.inner).log_value;
  }

  /// log of the integral over tau of likelihood(delta, tau) * h(tau).
  double log_tau_integral(double delta) const {
    if (!tau_is_free()) return loglik_random(delta, model_.tau_prior.param(0), comparison_);
    auto log_f = [&](double tau) { return loglik_random(delta, tau, comparison_) + log_pdf(model_.tau_prior, tau); };
    std::vector<double> hints = tau_hints_;
    if (tau_mode_) hints.push_back(*tau_mode_);
    return integrate_log(log_f, tau_range_.lower, tau_range_.upper, hints, options_.inner).log_value;
  }

  /// Unnormalised log posterior of tau with delta integrated out.
  double log_tau_density(double tau) const {
    const double prior = log_pdf(model_.tau_prior, tau);
    if (prior == kNegInf) return kNegInf;
    return prior + log_delta_integral(tau);
  }

  /// Unnormalised log posterior of delta with tau integrated out.
  double log_delta_density(double delta) const {
    const double prior = log_pdf(model_.delta_prior, delta);
    if (prior == kNegInf) return kNegInf;
    return prior + log_tau_integral(delta);
  }

  const std::vector<double>& tau_hints() const { return tau_hints_; }

  std::vector<double> delta_density_hints() const {
    std::vector<double> hints = delta_hints_;
    for (double tau : {0.0, tau_mode_.value_or(0.0)}) {
      const WeightedSummary ws = weighted_summary(tau, comparison_);
      const double sd = 1.0 / std::sqrt(ws.precision);
      for (double m : {-2.0, 0.0, 2.0}) hints.push_back(ws.mean + m * sd);
    }
    return hints;
  }

  double log_marginal() {
    if (!tau_is_free()) return log_delta_integral(model_.tau_prior.param(0));
    auto log_f = [&](double tau) { return log_tau_density(tau); };
    const Peak peak = locate_peak(log_f, tau_range_.lower, tau_range_.upper, tau_hints_);
    if (peak.log_max != kNegInf) tau_mode_ = peak.mode;
    std::vector<double> hints = tau_hints_;
    if (tau_mode_) hints.push_back(*tau_mode_);
    return integrate_log(log_f, tau_range_.lower, tau_range_.upper, hints, options_.outer).log_value;
  }

  std::optional<double> tau_mode() const { return tau_mode_; }

 private:
  const ModelSpec& model_;
  const Comparison comparison_;
  const MarginalOptions& options_;
  std::vector<double> delta_hints_;
  std::vector<double> tau_hints_;
  Interval tau_range_{0.0, 0.0};
  double tau_extent_ = 0.0;
  std::optional<double> tau_mode_;
};

std::vector<GridPoint> sample_grid(const std::function<double(double)>& log_f, double mode, double scale, double lo,
                                   double hi, std::size_t n) {
  // Dense near the mode, geometrically sparser in the tails.
  const double c = 4.0 * scale;
  const double u_lo = std::asinh((lo - mode) / c);
  const double u_hi = std::asinh((hi - mode) / c);
  std::vector<GridPoint> grid(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = mode + c * std::sinh(u_lo + (u_hi - u_lo) * static_cast<double>(j) / static_cast<double>(n - 1));
    if (j == 0) x = lo;
    if (j == n - 1) x = hi;
    grid[j] = {x, log_f(x)};
  }
  return grid;
}

// A density that diverges at a support edge (gamma shape < 1 at tau = 0) is
// resolved with points packed geometrically toward the pole. The end value is
// then chosen so the last sliver's trapezoid carries that sliver's exact mass.
// Densities are still in log form here.
void tame_singular_ends(std::vector<GridPoint>& grid, const std::function<double(double)>& log_f,
                        const MarginalOptions& options) {
  constexpr int kPoleLevels = 60;
  auto refine = [&](GridPoint end, GridPoint inner) {
    std::vector<GridPoint> pts;
    const double h = inner.value - end.value;
    for (int k = 1; k <= kPoleLevels; ++k) {
      const double x = end.value + h * std::ldexp(1.0, -k);
      if (x == end.value) break;
      pts.push_back({x, log_f(x)});
    }
    const GridPoint& near = pts.empty() ? inner : pts.back();
    const double a = std::min(end.value, near.value), b = std::max(end.value, near.value);
    const double log_mass = integrate_log(log_f, a, b, {}, options.outer).log_value;
    // 0.5 * (b - a) * (d_end + d_near) = mass, solved relative to d_near.
    const double ratio = 2.0 * std::exp(log_mass - near.density) / (b - a) - 1.0;
    end.density = near.density + std::log(std::max(ratio, 1.0));
    pts.push_back(end);
    return pts;
  };
  if (grid.front().density == -kNegInf) {
    auto pts = refine(grid.front(), grid[1]);
    grid.erase(grid.begin());
    grid.insert(grid.begin(), pts.rbegin(), pts.rend());
  }
  if (grid.back().density == -kNegInf) {
    auto pts = refine(grid.back(), grid[grid.size() - 2]);
    grid.pop_back();
    grid.insert(grid.end(), pts.begin(), pts.end());
  }
}

double trapezoid(const std::vector<GridPoint>& grid) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    total += 0.5 * (grid[i].density + grid[i + 1].density) * (grid[i + 1].value - grid[i].value);
  }
  return total;
}

// Gridded posterior from an unnormalised log density on `range`. The grid is
// refined once if its normalising constant disagrees with `log_evidence`.
std::vector<GridPoint> posterior_grid(const std::function<double(double)>& log_f, Interval range,
                                      std::span<const double> hints, double log_evidence,
                                      const MarginalOptions& options) {
  const Peak peak = locate_peak(log_f, range.lower, range.upper, hints);
  if (peak.log_max == kNegInf) throw DegenerateEvidenceError("posterior density is zero everywhere");

  auto extend = [&](double direction, double limit) {
    double step = 8.0 * peak.scale;
    for (int i = 0; i < 60; ++i) {
      const double x = peak.mode + direction * step;
      if (direction < 0 ? x <= limit : x >= limit) return limit;
      // The tail-mass test matters when the peak is a pole and dwarfs the bulk.
      if (log_f(x) < peak.log_max - kGridLogDrop &&
          (!std::isfinite(log_evidence) ||
           integrate_log(log_f, std::min(x, limit), std::max(x, limit), {}, options.outer).log_value <
               log_evidence - kGridLogDrop)) {
        return x;
      }
      step *= 2.0;
    }
    return limit;
  };
  const double lo = extend(-1.0, range.lower);
  const double hi = extend(1.0, range.upper);

  std::size_t n = std::max<std::size_t>(options.grid_points, 3);
  std::vector<GridPoint> grid;
  for (int attempt = 0; attempt < 2; ++attempt) {
    grid = sample_grid(log_f, peak.mode, peak.scale, lo, hi, n);
    tame_singular_ends(grid, log_f, options);
    double shift = kNegInf;
    for (const auto& g : grid) shift = std::max(shift, g.density);
    for (auto& g : grid) g.density = std::exp(g.density - shift);
    const double z = trapezoid(grid);
    const double error = std::abs(std::log(z) + shift - log_evidence);
    for (auto& g : grid) g.density /= z;
    if (!std::isfinite(log_evidence) || error <= options.grid_normalization_tol) break;
    n = 2 * n - 1;
  }
  return grid;
}

// Inverts the CDF of a piecewise-linear density; `cumulative[i]` is the mass
// left of grid[i].
double grid_quantile(const std::vector<GridPoint>& grid, const std::vector<double>& cumulative, double p) {
  if (p <= 0.0) return grid.front().value;
  if (p >= cumulative.back()) return grid.back().value;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), p);
  const std::size_t i = static_cast<std::size_t>(it - cumulative.begin()) - 1;
  const double h = grid[i + 1].value - grid[i].value;
  const double d0 = grid[i].density, d1 = grid[i + 1].density;
  const double r = p - cumulative[i];
  const double a = (d1 - d0) / (2.0 * h);
  const double disc = std::max(d0 * d0 + 4.0 * a * r, 0.0);
  const double denom = d0 + std::sqrt(disc);
  const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return grid[i].value + std::clamp(t, 0.0, h);
}

std::vector<double> cumulative_mass(const std::vector<GridPoint>& grid) {
  std::vector<double> cum(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    cum[i + 1] = cum[i] + 0.5 * (grid[i].density + grid[i + 1].density) * (grid[i + 1].value - grid[i].value);
  }
  return cum;
}

double interpolate(const std::vector<GridPoint>& grid, double x) {
  if (grid.empty() || x < grid.front().value || x > grid.back().value) return 0.0;
  const auto it = std::lower_bound(grid.begin(), grid.end(), x,
                                   [](const GridPoint& g, double v) { return g.value < v; });
  if (it == grid.begin()) return it->density;
  const auto prev = it - 1;
  const double h = it->value - prev->value;
  if (h <= 0.0) return it->density;
  const double t = (x - prev->value) / h;
  return prev->density + t * (it->density - prev->density);
}

}  // namespace

std::string_view model_type_name(ModelType type) {
  switch (type) {
    case ModelType::FixedNull: return "fixed_H0";
    case ModelType::FixedAlternative: return "fixed_H1";
    case ModelType::RandomNull: return "random_H0";
    case ModelType::RandomAlternative: return "random_H1";
  }
  return "unknown";
}

bool delta_free(const ModelSpec& model) noexcept { return !model.delta_prior.is_point_mass(); }
bool tau_free(const ModelSpec& model) noexcept { return !model.tau_prior.is_point_mass(); }

ModelType model_type(const ModelSpec& model) noexcept {
  const bool d = delta_free(model), t = tau_free(model);
  if (t) return d ? ModelType::RandomAlternative : ModelType::RandomNull;
  return d ? ModelType::FixedAlternative : ModelType::FixedNull;
}

void validate(const ModelSpec& model) {
  if (model.tau_prior.support().lower < 0.0) {
    throw ParameterDomainError("model '" + model.name + "': tau prior must have non-negative support");
  }
}

double log_marginal(const ModelSpec& model, const Comparison& comparison, const MarginalOptions& options) {
  ModelIntegrator integrator(model, comparison, options);
  return integrator.log_marginal();
}

PosteriorSummary posterior_summary(const ModelSpec& model, const Comparison& comparison, Parameter parameter,
                                   const MarginalOptions& options) {
  ModelIntegrator integrator(model, comparison, options);
  if (parameter == Parameter::Delta && !integrator.delta_is_free()) {
    throw UnsupportedOperationError("model '" + model.name + "' fixes delta at a point");
  }
  if (parameter == Parameter::Tau && !integrator.tau_is_free()) {
    throw UnsupportedOperationError("model '" + model.name + "' fixes tau at a point");
  }
  const double log_evidence = integrator.log_marginal();

  std::vector<GridPoint> grid;
  if (parameter == Parameter::Tau) {
    auto log_f = [&](double tau) { return integrator.log_tau_density(tau); };
    std::vector<double> hints = integrator.tau_hints();
    if (integrator.tau_mode()) hints.push_back(*integrator.tau_mode());
    grid = posterior_grid(log_f, integrator.tau_range(), hints, log_evidence, options);
  } else {
    auto log_f = [&](double delta) { return integrator.log_delta_density(delta); };
    Interval range = integrator.delta_range(integrator.tau_mode().value_or(0.0));
    const Interval at_zero = integrator.delta_range(0.0);
    range = {std::min(range.lower, at_zero.lower), std::max(range.upper, at_zero.upper)};
    grid = posterior_grid(log_f, range, integrator.delta_density_hints(), log_evidence, options);
  }
  return summarize_grid(std::move(grid));
}

PosteriorSummary summarize_grid(std::vector<GridPoint> grid) {
  if (grid.size() < 2) throw DegenerateDataError("summarize_grid: need at least two grid points");
  const double z = trapezoid(grid);
  if (!(z > 0.0) || !std::isfinite(z)) throw DegenerateEvidenceError("summarize_grid: density has no mass");
  for (auto& g : grid) g.density /= z;

  double m = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1].value - grid[i].value;
    m += 0.5 * h * (grid[i].value * grid[i].density + grid[i + 1].value * grid[i + 1].density);
  }
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1].value - grid[i].value;
    const double a = grid[i].value - m, b = grid[i + 1].value - m;
    v += 0.5 * h * (a * a * grid[i].density + b * b * grid[i + 1].density);
  }
  const auto cum = cumulative_mass(grid);
  PosteriorSummary s;
  s.mean = m;
  s.sd = std::sqrt(std::max(v, 0.0));
  s.median = grid_quantile(grid, cum, 0.5);
  s.ci_lower = grid_quantile(grid, cum, 0.025);
  s.ci_upper = grid_quantile(grid, cum, 0.975);
  s.grid = std::move(grid);
  return s;
}

PosteriorSummary mixture_summary(std::span<const PosteriorSummary* const> components, std::span<const double> weights,
                                 std::optional<PointMassComponent> atom) {
  if (components.size() != weights.size() || components.empty()) {
    throw ParameterDomainError("mixture_summary: components and weights must be non-empty and aligned");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw DegenerateEvidenceError("mixture_summary: weights sum to zero");

  std::vector<double> xs;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    for (const auto& g : components[i]->grid) xs.push_back(g.value);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<GridPoint> grid(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (weights[i] > 0.0) d += weights[i] / total * interpolate(components[i]->grid, xs[j]);
    }
    grid[j] = {xs[j], d};
  }
  PosteriorSummary s = summarize_grid(std::move(grid));
  if (!atom || atom->probability <= 0.0) return s;

  // Continuous part carries 1 - pi of the mass; the atom carries pi.
  const double pi = std::clamp(atom->probability, 0.0, 1.0);
  const double a = atom->location;
  if (pi >= 1.0) {
    s.mean = s.median = s.ci_lower = s.ci_upper = a;
    s.sd = 0.0;
    s.atom = PointMassComponent{a, 1.0};
    return s;
  }
  const double mean_c = s.mean, var_c = s.sd * s.sd;
  const double mix_mean = (1 - pi) * mean_c + pi * a;
  const double second = (1 - pi) * (var_c + mean_c * mean_c) + pi * a * a;
  const auto cum = cumulative_mass(s.grid);
  const double f_at_atom = [&] {
    if (a <= s.grid.front().value) return 0.0;
    if (a >= s.grid.back().value) return 1.0;
    // Mass left of a under the piecewise-linear density.
    const auto it = std::lower_bound(s.grid.begin(), s.grid.end(), a,
                                     [](const GridPoint& g, double v) { return g.value < v; });
    const std::size_t i = static_cast<std::size_t>(it - s.grid.begin()) - 1;
    const double t = a - s.grid[i].value;
    return cum[i] + 0.5 * t * (s.grid[i].density + interpolate(s.grid, a));
  }();
  auto q = [&](double p) {
    const double below = (1 - pi) * f_at_atom;
    if (p < below) return grid_quantile(s.grid, cum, p / (1 - pi));
    if (p <= below + pi) return a;
    return grid_quantile(s.grid, cum, (p - pi) / (1 - pi));
  };
  s.mean = mix_mean;
  s.sd = std::sqrt(std::max(second - mix_mean * mix_mean, 0.0));
  s.median = q(0.5);
  s.ci_lower = q(0.025);
  s.ci_upper = q(0.975);
  s.atom = PointMassComponent{a, pi};
  return s;
}

}  // namespace bma
