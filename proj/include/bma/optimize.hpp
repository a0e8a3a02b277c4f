#pragma once

#include <functional>
#include <vector>

namespace bma {

struct ScalarOptimum {
  double x;
  double value;
  int iterations;
  bool converged;
};

/// Golden-section search for the maximum of a unimodal function on [lower, upper].
/// Stops once the bracket is narrower than `tolerance`.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lower, double upper,
                                      double tolerance, int max_iterations = 500);

struct VectorOptimum {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

/// Nelder-Mead simplex minimisation. Converges when the simplex diameter and
/// the spread of function values both fall below `tolerance`.
VectorOptimum nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, double initial_step, double tolerance,
                                   int max_iterations = 20000);

}  // namespace bma
