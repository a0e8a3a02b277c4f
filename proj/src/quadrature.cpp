#include "bma/quadrature.hpp"

#include "bma/error.hpp"
#include "bma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace bma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b, int& evaluations) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(centre - dx) + f(centre + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  evaluations += 15;
  return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

Peak locate_peak(const std::function<double(double)>& log_f, double lower, double upper,
                 std::span<const double> hints) {
  std::vector<double> pts;
  pts.reserve(hints.size() + 18);
  for (double h : hints) {
    if (std::isfinite(h) && h > lower && h < upper) pts.push_back(h);
  }
  constexpr int kCoarse = 16;
  for (int j = 1; j < kCoarse; ++j) pts.push_back(lower + (upper - lower) * j / kCoarse);
  pts.push_back(lower);
  pts.push_back(upper);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::size_t best = 0;
  double best_val = kNegInf;
  // An integrable singularity (+inf at a support edge) is skipped; GK nodes never touch it.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = log_f(pts[i]);
    if (v > best_val && v != -kNegInf) {
      best_val = v;
      best = i;
    }
  }
  if (best_val == kNegInf) return {0.5 * (lower + upper), kNegInf, upper - lower};

  const double left = pts[best == 0 ? 0 : best - 1];
  const double right = pts[std::min(best + 1, pts.size() - 1)];
  auto safe = [&](double x) {
    const double v = log_f(x);
    return std::isnan(v) || v == -kNegInf ? kNegInf : v;
  };
  const double width = right - left;
  ScalarOptimum opt = golden_section_maximize(safe, left, right, 1e-9 * std::max(width, 1e-300) + 1e-14, 200);
  double mode = pts[best];
  double log_max = best_val;
  if (opt.value > log_max) {
    mode = opt.x;
    log_max = opt.value;
  }

  double scale = width / 4.0;
  double h = std::max(1e-4 * width, 1e-7 * (1.0 + std::abs(mode)));
  if (mode - h > lower && mode + h < upper) {
    const double curvature = (safe(mode + h) - 2.0 * log_max + safe(mode - h)) / (h * h);
    if (std::isfinite(curvature) && curvature < 0.0) scale = std::min(scale, 1.0 / std::sqrt(-curvature));
  }
  if (!(scale > 0.0)) scale = (upper - lower) / 64.0;
  return {mode, log_max, scale};
}

LogIntegral integrate_log(const std::function<double(double)>& log_f, double lower, double upper,
                          std::span<const double> hints, const QuadratureOptions& options) {
  if (!(std::isfinite(lower) && std::isfinite(upper))) {
    throw NumericDomainError("integrate_log: bounds must be finite");
  }
  if (!(upper > lower)) return {kNegInf, 0.0, 0};

  const Peak peak = locate_peak(log_f, lower, upper, hints);
  if (peak.log_max == kNegInf) return {kNegInf, 0.0, 0};
  if (!std::isfinite(peak.log_max)) throw NumericDomainError("integrate_log: integrand is not finite");

  std::vector<double> cuts{lower, upper};
  for (double h : hints) {
    if (std::isfinite(h) && h > lower && h < upper) cuts.push_back(h);
  }
  cuts.push_back(std::clamp(peak.mode, lower, upper));
  for (double m : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    for (double sign : {-1.0, 1.0}) {
      const double c = peak.mode + sign * m * peak.scale;
      if (c > lower && c < upper) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double min_gap = 1e-13 * std::max({std::abs(lower), std::abs(upper), upper - lower});
  std::vector<double> edges{cuts.front()};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] - edges.back() > min_gap) edges.push_back(cuts[i]);
  }
  if (edges.back() != upper) edges.back() = upper;

  const double shift = peak.log_max;
  auto f = [&](double x) {
    const double v = log_f(x) - shift;
    return std::isnan(v) ? 0.0 : std::exp(v);
  };

  int evaluations = 0;
  std::priority_queue<Segment> queue;
  double total = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = kronrod15(f, edges[i], edges[i + 1], evaluations);
    total += s.value;
    error += s.error;
    queue.push(s);
  }

  while (error > options.rel_tol * std::abs(total)) {
    if (static_cast<int>(queue.size()) >= options.max_intervals) {
      const Segment worst = queue.top();
      throw ConvergenceError("adaptive quadrature did not converge", worst.a, worst.b);
    }
    const Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    queue.pop();
    const Segment left = kronrod15(f, worst.a, mid, evaluations);
    const Segment right = kronrod15(f, mid, worst.b, evaluations);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    if (error < 0.0) error = 0.0;
  }

  // Re-sum to shed drift from the incremental updates.
  total = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  if (!(total > 0.0)) return {kNegInf, 0.0, evaluations};
  return {shift + std::log(total), error / total, evaluations};
}

}  // namespace bma
