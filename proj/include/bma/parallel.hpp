#pragma once

#include <cstddef>

namespace bma {

/// How corpus-level kernels iterate over independent comparisons. Serial is
/// the reference path; Parallel distributes indices over OpenMP threads.
enum class Execution { Serial, Parallel };

/// Calls fn(i) for i in [0, n). `fn` must not throw and must only write to
/// state owned by index i.
template <typename Fn>
void for_each_index(std::size_t n, Execution execution, Fn&& fn) {
  if (execution == Execution::Parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

/// Sets the OpenMP thread count; n == 0 keeps the runtime default.
void set_thread_count(int n);
int max_threads();

}  // namespace bma
