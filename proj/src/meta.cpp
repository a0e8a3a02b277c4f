#include "bma/meta.hpp"

#include "bma/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bma {

namespace {
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
}

bool Study::estimable() const noexcept { return std::isfinite(effect) && std::isfinite(se) && se > 0.0; }

bool Comparison::estimable() const noexcept {
  return !studies.empty() && std::all_of(studies.begin(), studies.end(), [](const Study& s) { return s.estimable(); });
}

Comparison Comparison::subset(std::span<const std::size_t> indices) const {
  Comparison out{id, {}, subfield};
  out.studies.reserve(indices.size());
  for (std::size_t i : indices) out.studies.push_back(studies.at(i));
  return out;
}

Comparison make_comparison(std::span<const double> effects, std::span<const double> ses, std::string id) {
  if (effects.size() != ses.size()) throw ParameterDomainError("effects and ses differ in length");
  Comparison c{std::move(id), {}, std::nullopt};
  for (std::size_t i = 0; i < effects.size(); ++i) {
    c.studies.push_back({effects[i], ses[i], "Study " + std::to_string(i + 1), std::nullopt});
  }
  return c;
}

EffectSize smd_from_raw(const RawSummary& r) {
  if (!(r.n1 >= 2 && r.n2 >= 2)) throw ParameterDomainError("raw summary: each arm needs n >= 2");
  if (!(r.sd1 >= 0 && r.sd2 >= 0) || !std::isfinite(r.mean1) || !std::isfinite(r.mean2)) {
    throw ParameterDomainError("raw summary: invalid means or standard deviations");
  }
  const double pooled_var =
      ((r.n1 - 1) * r.sd1 * r.sd1 + (r.n2 - 1) * r.sd2 * r.sd2) / (r.n1 + r.n2 - 2);
  if (!(pooled_var > 0.0)) throw DegenerateDataError("raw summary: both arms have zero standard deviation");
  const double d = (r.mean1 - r.mean2) / std::sqrt(pooled_var);
  const double n = r.n1 + r.n2;
  const double var = n / (r.n1 * r.n2) + d * d / (2.0 * n);
  return {d, std::sqrt(var)};
}

void validate(const Comparison& comparison) {
  if (comparison.studies.empty()) throw NumericDomainError("comparison '" + comparison.id + "' has no studies");
  for (std::size_t i = 0; i < comparison.studies.size(); ++i) {
    if (!comparison.studies[i].estimable()) {
      throw NumericDomainError("comparison '" + comparison.id + "': study " + std::to_string(i + 1) +
                               " needs a finite effect and a positive finite se");
    }
  }
}

double loglik_fixed(double delta, const Comparison& comparison) {
  double total = 0.0;
  for (const Study& s : comparison.studies) {
    const double z = (s.effect - delta) / s.se;
    total += -0.5 * kLog2Pi - std::log(s.se) - 0.5 * z * z;
  }
  return total;
}

double loglik_random(double delta, double tau, const Comparison& comparison) {
  if (tau == 0.0) return loglik_fixed(delta, comparison);
  double total = 0.0;
  const double tau2 = tau * tau;
  for (const Study& s : comparison.studies) {
    const double var = s.se * s.se + tau2;
    const double r = s.effect - delta;
    total += -0.5 * (kLog2Pi + std::log(var) + r * r / var);
  }
  return total;
}

WeightedSummary weighted_summary(double tau, const Comparison& comparison) {
  const double tau2 = tau * tau;
  double sw = 0.0, swy = 0.0, log_var = 0.0;
  for (const Study& s : comparison.studies) {
    const double var = s.se * s.se + tau2;
    sw += 1.0 / var;
    swy += s.effect / var;
    log_var += std::log(var);
  }
  const double mean = swy / sw;
  double q = 0.0;
  for (const Study& s : comparison.studies) {
    const double r = s.effect - mean;
    q += r * r / (s.se * s.se + tau2);
  }
  const double k = static_cast<double>(comparison.studies.size());
  return {mean, sw, -0.5 * (k * kLog2Pi + log_var + q)};
}

}  // namespace bma
