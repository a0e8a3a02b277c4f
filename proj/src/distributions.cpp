#include "bma/distributions.hpp"

#include "bma/error.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace bma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require(bool ok, const char* what) {
  if (!ok) throw ParameterDomainError(what);
}

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("probability must lie in (0, 1)");
}

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::PointMass: return "point";
    case Family::Uniform: return "uniform";
    case Family::Normal: return "normal";
    case Family::HalfNormal: return "halfnormal";
    case Family::Cauchy: return "cauchy";
    case Family::StudentT: return "t";
    case Family::Gamma: return "gamma";
    case Family::InverseGamma: return "invgamma";
  }
  return "unknown";
}

std::size_t PriorSpec::param_count(Family family) noexcept {
  switch (family) {
    case Family::PointMass:
    case Family::HalfNormal: return 1;
    case Family::StudentT: return 3;
    default: return 2;
  }
}

PriorSpec PriorSpec::make(Family family, std::span<const double> params) {
  if (params.size() != param_count(family)) {
    throw ParameterDomainError(std::string(family_name(family)) + ": expected " +
                               std::to_string(param_count(family)) + " parameters");
  }
  for (double v : params) require(std::isfinite(v), "prior parameters must be finite");
  std::array<double, 3> p{0.0, 0.0, 0.0};
  std::copy(params.begin(), params.end(), p.begin());
  switch (family) {
    case Family::PointMass: break;
    case Family::Uniform: require(p[1] > p[0], "uniform: upper must exceed lower"); break;
    case Family::Normal: require(p[1] > 0, "normal: sd must be positive"); break;
    case Family::HalfNormal: require(p[0] > 0, "halfnormal: sd must be positive"); break;
    case Family::Cauchy: require(p[1] > 0, "cauchy: scale must be positive"); break;
    case Family::StudentT:
      require(p[1] > 0, "t: scale must be positive");
      require(p[2] > 0, "t: df must be positive");
      break;
    case Family::Gamma:
    case Family::InverseGamma:
      require(p[0] > 0, "shape must be positive");
      require(p[1] > 0, "scale must be positive");
      break;
  }
  return PriorSpec(family, p);
}

PriorSpec PriorSpec::point_mass(double value) { return make(Family::PointMass, std::array{value}); }
PriorSpec PriorSpec::uniform(double lower, double upper) {
  return make(Family::Uniform, std::array{lower, upper});
}
PriorSpec PriorSpec::normal(double mean, double sd) { return make(Family::Normal, std::array{mean, sd}); }
PriorSpec PriorSpec::half_normal(double sd) { return make(Family::HalfNormal, std::array{sd}); }
PriorSpec PriorSpec::cauchy(double location, double scale) {
  return make(Family::Cauchy, std::array{location, scale});
}
PriorSpec PriorSpec::student_t(double location, double scale, double df) {
  return make(Family::StudentT, std::array{location, scale, df});
}
PriorSpec PriorSpec::gamma(double shape, double scale) { return make(Family::Gamma, std::array{shape, scale}); }
PriorSpec PriorSpec::inverse_gamma(double shape, double scale) {
  return make(Family::InverseGamma, std::array{shape, scale});
}

double PriorSpec::param(std::size_t i) const {
  if (i >= param_count(family_)) throw ParameterDomainError("parameter index out of range");
  return params_[i];
}

Interval PriorSpec::support() const noexcept {
  switch (family_) {
    case Family::PointMass: return {params_[0], params_[0]};
    case Family::Uniform: return {params_[0], params_[1]};
    case Family::HalfNormal:
    case Family::Gamma:
    case Family::InverseGamma: return {0.0, kInf};
    default: return {-kInf, kInf};
  }
}

double log_pdf(const PriorSpec& spec, double x) {
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::PointMass: return x == p[0] ? 0.0 : -kInf;
    case Family::Uniform: return (x >= p[0] && x <= p[1]) ? -std::log(p[1] - p[0]) : -kInf;
    case Family::Normal: {
      const double z = (x - p[0]) / p[1];
      return -std::log(p[1]) - kHalfLog2Pi - 0.5 * z * z;
    }
    case Family::HalfNormal: {
      if (x < 0) return -kInf;
      const double z = x / p[0];
      return std::numbers::ln2 - std::log(p[0]) - kHalfLog2Pi - 0.5 * z * z;
    }
    case Family::Cauchy: {
      const double z = (x - p[0]) / p[1];
      return -std::log(std::numbers::pi * p[1]) - std::log1p(z * z);
    }
    case Family::StudentT: {
      const double z = (x - p[0]) / p[1];
      const double nu = p[2];
      return std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
             std::log(p[1]) - 0.5 * (nu + 1) * std::log1p(z * z / nu);
    }
    case Family::Gamma: {
      const double k = p[0], theta = p[1];
      if (x < 0) return -kInf;
      if (x == 0) return k < 1 ? kInf : (k == 1 ? -std::log(theta) : -kInf);
      return (k - 1) * std::log(x) - x / theta - std::lgamma(k) - k * std::log(theta);
    }
    case Family::InverseGamma: {
      const double a = p[0], b = p[1];
      if (x <= 0) return -kInf;
      return a * std::log(b) - std::lgamma(a) - (a + 1) * std::log(x) - b / x;
    }
  }
  return kNaN;
}

double cdf(const PriorSpec& spec, double x) {
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::PointMass: return x >= p[0] ? 1.0 : 0.0;
    case Family::Uniform: return std::clamp((x - p[0]) / (p[1] - p[0]), 0.0, 1.0);
    case Family::Normal: return 0.5 * std::erfc(-(x - p[0]) / (p[1] * std::numbers::sqrt2));
    case Family::HalfNormal: return x <= 0 ? 0.0 : std::erf(x / (p[0] * std::numbers::sqrt2));
    case Family::Cauchy: return 0.5 + std::atan((x - p[0]) / p[1]) / std::numbers::pi;
    case Family::StudentT: {
      if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
      boost::math::students_t_distribution<double> t(p[2]);
      return boost::math::cdf(t, (x - p[0]) / p[1]);
    }
    case Family::Gamma:
      if (x <= 0) return 0.0;
      if (std::isinf(x)) return 1.0;
      return boost::math::gamma_p(p[0], x / p[1]);
    case Family::InverseGamma:
      if (x <= 0) return 0.0;
      if (std::isinf(x)) return 1.0;
      return boost::math::gamma_q(p[0], p[1] / x);
  }
  return kNaN;
}

double quantile(const PriorSpec& spec, double prob) {
  if (spec.is_point_mass()) throw UnsupportedOperationError("quantile is undefined for a point mass");
  require_probability(prob);
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::Uniform: return p[0] + prob * (p[1] - p[0]);
    case Family::Normal: return p[0] - p[1] * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * prob);
    case Family::HalfNormal: return p[0] * std::numbers::sqrt2 * boost::math::erf_inv(prob);
    case Family::Cauchy: return p[0] + p[1] * std::tan(std::numbers::pi * (prob - 0.5));
    case Family::StudentT: {
      boost::math::students_t_distribution<double> t(p[2]);
      return p[0] + p[1] * boost::math::quantile(t, prob);
    }
    case Family::Gamma: return p[1] * boost::math::gamma_p_inv(p[0], prob);
    case Family::InverseGamma: return p[1] / boost::math::gamma_q_inv(p[0], prob);
    case Family::PointMass: break;
  }
  return kNaN;
}

double mean(const PriorSpec& spec) {
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::PointMass: return p[0];
    case Family::Uniform: return 0.5 * (p[0] + p[1]);
    case Family::Normal: return p[0];
    case Family::HalfNormal: return p[0] * std::sqrt(2.0 / std::numbers::pi);
    case Family::Cauchy: return kNaN;
    case Family::StudentT: return p[2] > 1 ? p[0] : kNaN;
    case Family::Gamma: return p[0] * p[1];
    case Family::InverseGamma: return p[0] > 1 ? p[1] / (p[0] - 1) : kInf;
  }
  return kNaN;
}

std::vector<double> sample(const PriorSpec& spec, std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw ParameterDomainError("sample: n must be at least 1");
  const auto p = spec.params();
  std::vector<double> out(n);
  auto fill = [&](auto&& draw) { std::generate(out.begin(), out.end(), draw); };
  switch (spec.family()) {
    case Family::PointMass: std::fill(out.begin(), out.end(), p[0]); break;
    case Family::Uniform: {
      std::uniform_real_distribution<double> d(p[0], p[1]);
      fill([&] { return d(rng); });
      break;
    }
    case Family::Normal: {
      std::normal_distribution<double> d(p[0], p[1]);
      fill([&] { return d(rng); });
      break;
    }
    case Family::HalfNormal: {
      std::normal_distribution<double> d(0.0, p[0]);
      fill([&] { return std::abs(d(rng)); });
      break;
    }
    case Family::Cauchy: {
      std::cauchy_distribution<double> d(p[0], p[1]);
      fill([&] { return d(rng); });
      break;
    }
    case Family::StudentT: {
      std::student_t_distribution<double> d(p[2]);
      fill([&] { return p[0] + p[1] * d(rng); });
      break;
    }
    case Family::Gamma: {
      std::gamma_distribution<double> d(p[0], p[1]);
      fill([&] { return d(rng); });
      break;
    }
    case Family::InverseGamma: {
      std::gamma_distribution<double> d(p[0], 1.0);
      fill([&] { return p[1] / d(rng); });
      break;
    }
  }
  return out;
}

double log_likelihood(const PriorSpec& spec, std::span<const double> data) {
  double total = 0.0;
  for (double x : data) total += log_pdf(spec, x);
  return total;
}

std::string to_string(const PriorSpec& spec) {
  std::string out(family_name(spec.family()));
  out += '(';
  bool first = true;
  for (double v : spec.params()) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += ')';
  return out;
}

PriorSpec parse_prior(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const auto open = s.find('(');
  if (open == std::string::npos || s.empty() || s.back() != ')') {
    throw ParseError("prior spec must look like name(args): '" + std::string(text) + "'");
  }
  const std::string name = s.substr(0, open);
  static const std::pair<std::string_view, Family> kNames[] = {
      {"point", Family::PointMass},   {"uniform", Family::Uniform}, {"normal", Family::Normal},
      {"halfnormal", Family::HalfNormal}, {"cauchy", Family::Cauchy}, {"t", Family::StudentT},
      {"gamma", Family::Gamma},        {"invgamma", Family::InverseGamma}};
  const auto it = std::find_if(std::begin(kNames), std::end(kNames), [&](const auto& e) { return e.first == name; });
  if (it == std::end(kNames)) throw ParseError("unknown prior family '" + name + "'");

  std::vector<double> args;
  std::string_view body(s.data() + open + 1, s.size() - open - 2);
  while (true) {
    const auto comma = body.find(',');
    const std::string_view token = body.substr(0, comma);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ParseError("invalid number '" + std::string(token) + "' in prior spec '" + std::string(text) + "'");
    }
    args.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  try {
    return PriorSpec::make(it->second, args);
  } catch (const ParameterDomainError& e) {
    throw ParseError(std::string("invalid prior '") + std::string(text) + "': " + e.what());
  }
}

}  // namespace bma
