#pragma once

#include <exception>
#include <mutex>

#include <Eigen/Core>

namespace lapmor::detail {

/// OpenMP loop over [0, n) that rethrows the first exception on the caller.
template <class Fn>
void parallel_for(Eigen::Index n, Fn&& fn) {
  std::exception_ptr err;
  std::mutex m;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace lapmor::detail
