// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

namespace onebit {

/// Selects the serial reference loop or the OpenMP kernel. Both paths
/// produce bitwise-identical results; the serial path exists for testing
/// and benchmarking.
enum class Exec { Serial, Parallel };

/// Number of threads an OpenMP region would use (1 without OpenMP).
int max_threads() noexcept;

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n) noexcept;

/// Calls fn(i) for i in [0, count). Each index must write only its own
/// output slot. If any call throws, the exception of the lowest failing
/// index is rethrown after the loop, so failures are reported the same
/// way for every thread count.
template <typename Fn>
void parallel_for(std::size_t count, Exec exec, Fn&& fn) {
  const auto total = static_cast<std::int64_t>(count);
  std::exception_ptr first_error;
  std::int64_t first_index = total;
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < total; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        first_error = std::current_exception();
        break;
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < total; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(onebit_parallel_for_error)
        {
          if (i < first_index) {
            first_index = i;
            first_error = std::current_exception();
          }
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace onebit
