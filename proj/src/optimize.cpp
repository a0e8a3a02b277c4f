#include "bma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bma {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lower, double upper,
                                      double tolerance, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lower, b = upper;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while ((b - a) > tolerance && it < max_iterations) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  ScalarOptimum best{fc >= fd ? c : d, std::max(fc, fd), it, (b - a) <= tolerance};
  // The bracket endpoints are never evaluated by the interior probes.
  for (double edge : {lower, upper}) {
    if (edge == a || edge == b) {
      const double fe = f(edge);
      if (fe > best.value) {
        best.x = edge;
        best.value = fe;
      }
    }
  }
  return best;
}

VectorOptimum nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, double initial_step, double tolerance,
                                   int max_iterations) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  auto safe = [](double v) { return std::isnan(v) ? HUGE_VAL : v; };
  for (auto& v : values) v = safe(v);

  std::vector<std::size_t> order(n + 1);
  int it = 0;
  bool converged = false;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (diameter < tolerance && std::abs(values[worst] - values[best]) < tolerance) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
      return p;
    };

    auto reflected = along(-1.0);
    const double fr = safe(f(reflected));
    if (fr < values[best]) {
      auto expanded = along(-2.0);
      const double fe = safe(f(expanded));
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    auto contracted = fr < values[worst] ? along(-0.5) : along(0.5);
    const double fc = safe(f(contracted));
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      values[i] = safe(f(simplex[i]));
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  return {simplex[best], values[best], it, converged};
}

}  // namespace bma
