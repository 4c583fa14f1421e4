#pragma once

#include <exception>

namespace elast {

/// Selects the serial reference loop or the OpenMP loop for the per-element
/// kernels. Both write to disjoint per-element slots and reduce in index
/// order, so results are bitwise identical.
enum class ExecPolicy { serial, parallel };

/// Runs fn(i) for i in [0, n). Under ExecPolicy::parallel the first exception
/// thrown by any iteration is rethrown after the loop.
template <class Fn>
void for_each_index(int n, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(elast_for_each_index)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace elast
