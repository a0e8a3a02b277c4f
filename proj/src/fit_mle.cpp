#include "bma/distributions.hpp"
#include "bma/error.hpp"
#include "bma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bma {

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments moments(std::span<const double> data) {
  const double n = static_cast<double>(data.size());
  const double m = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : data) ss += (x - m) * (x - m);
  return {m, ss / n};
}

double mean_square(std::span<const double> data) {
  double ss = 0.0;
  for (double x : data) ss += x * x;
  return ss / static_cast<double>(data.size());
}

double median_abs(std::span<const double> data, double centre) {
  std::vector<double> dev(data.size());
  std::transform(data.begin(), data.end(), dev.begin(), [&](double x) { return std::abs(x - centre); });
  std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(dev.size() / 2), dev.end());
  return dev[dev.size() / 2];
}

// Minimises the negative log likelihood over log-transformed positive
// parameters, restarting from each start and once more from the incumbent.
std::vector<double> best_of_starts(const std::function<double(const std::vector<double>&)>& nll,
                                   const std::vector<std::vector<double>>& starts, const FitOptions& options) {
  VectorOptimum best{{}, HUGE_VAL, 0, false};
  for (const auto& s : starts) {
    auto opt = nelder_mead_minimize(nll, s, 0.25, options.tolerance);
    if (opt.value < best.value) best = opt;
  }
  for (int i = 0; i < options.restarts; ++i) {
    auto polished = nelder_mead_minimize(nll, best.x, 0.05, options.tolerance);
    if (polished.value <= best.value) best = polished;
  }
  return best.x;
}

double nll_or_inf(Family family, std::span<const double> params, std::span<const double> data) {
  try {
    const double ll = log_likelihood(PriorSpec::make(family, params), data);
    return std::isfinite(ll) ? -ll : HUGE_VAL;
  } catch (const ParameterDomainError&) {
    return HUGE_VAL;
  }
}

}  // namespace

PriorSpec fit_mle(Family family, std::span<const double> data, const FitOptions& options) {
  if (data.size() < 2) throw DegenerateDataError("fit_mle: at least two observations are required");
  for (double x : data) {
    if (!std::isfinite(x)) throw ParameterDomainError("fit_mle: data must be finite");
  }
  const Moments mom = moments(data);
  if (!(mom.variance > 0.0)) throw DegenerateDataError("fit_mle: data have zero variance");

  const bool positive_support = family == Family::Gamma || family == Family::InverseGamma;
  for (double x : data) {
    if (positive_support && !(x > 0.0)) throw ParameterDomainError("fit_mle: data must be strictly positive");
    if (family == Family::HalfNormal && x < 0.0) throw ParameterDomainError("fit_mle: data must be non-negative");
  }

  switch (family) {
    case Family::Normal:
      if (options.zero_location) return PriorSpec::normal(0.0, std::sqrt(mean_square(data)));
      return PriorSpec::normal(mom.mean, std::sqrt(mom.variance));

    case Family::HalfNormal: return PriorSpec::half_normal(std::sqrt(mean_square(data)));

    case Family::StudentT: {
      const double centre = options.zero_location ? 0.0 : mom.mean;
      const double scale0 = std::max(median_abs(data, centre) / 0.6745, 1e-8);
      auto unpack = [&](const std::vector<double>& v) {
        const double loc = options.zero_location ? 0.0 : v[2];
        return std::array{loc, std::exp(v[0]), std::exp(v[1])};
      };
      auto nll = [&](const std::vector<double>& v) {
        if (std::abs(v[0]) > 700 || v[1] > 30 || v[1] < -10) return HUGE_VAL;
        return nll_or_inf(Family::StudentT, unpack(v), data);
      };
      std::vector<std::vector<double>> starts;
      for (double df : {2.0, 5.0, 30.0}) {
        std::vector<double> s{std::log(scale0), std::log(df)};
        if (!options.zero_location) s.push_back(centre);
        starts.push_back(std::move(s));
      }
      const auto x = best_of_starts(nll, starts, options);
      const auto p = unpack(x);
      return PriorSpec::student_t(p[0], p[1], p[2]);
    }

    case Family::Gamma: {
      const double shape0 = mom.mean * mom.mean / mom.variance;
      const double scale0 = mom.variance / mom.mean;
      auto nll = [&](const std::vector<double>& v) {
        if (std::abs(v[0]) > 300 || std::abs(v[1]) > 300) return HUGE_VAL;
        return nll_or_inf(Family::Gamma, std::array{std::exp(v[0]), std::exp(v[1])}, data);
      };
      std::vector<std::vector<double>> starts;
      for (double f : {0.5, 1.0, 2.0}) starts.push_back({std::log(shape0 * f), std::log(scale0 / f)});
      const auto x = best_of_starts(nll, starts, options);
      return PriorSpec::gamma(std::exp(x[0]), std::exp(x[1]));
    }

    case Family::InverseGamma: {
      std::vector<double> inv(data.size());
      std::transform(data.begin(), data.end(), inv.begin(), [](double x) { return 1.0 / x; });
      const Moments im = moments(inv);
      const double shape0 = im.mean * im.mean / im.variance;
      const double scale0 = im.mean / im.variance;
      auto nll = [&](const std::vector<double>& v) {
        if (std::abs(v[0]) > 300 || std::abs(v[1]) > 300) return HUGE_VAL;
        return nll_or_inf(Family::InverseGamma, std::array{std::exp(v[0]), std::exp(v[1])}, data);
      };
      std::vector<std::vector<double>> starts;
      for (double f : {0.5, 1.0, 2.0}) starts.push_back({std::log(shape0 * f), std::log(scale0 * f)});
      const auto x = best_of_starts(nll, starts, options);
      return PriorSpec::inverse_gamma(std::exp(x[0]), std::exp(x[1]));
    }

    default:
      throw UnsupportedOperationError("fit_mle: unsupported family '" + std::string(family_name(family)) + "'");
  }
}

}  // namespace bma
