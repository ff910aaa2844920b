#pragma once

#include <cstddef>
#include <functional>

namespace ultra {

/// Worker count used by the triplet scans. Defaults to the hardware
/// concurrency, overridable with the ULTRA_THREADS environment variable.
std::size_t thread_count();

/// Set the worker count; 0 restores the default.
void set_thread_count(std::size_t count);

/// Run `task(chunk)` for every chunk in [0, chunks), distributed over the
/// configured workers. Callers write per-chunk results into preallocated
/// slots and reduce them in chunk order, so the outcome does not depend on
/// scheduling.
void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& task);

/// RAII override of the worker count, mostly for tests.
class ScopedThreadCount {
 public:
  explicit ScopedThreadCount(std::size_t count);
  ~ScopedThreadCount();
  ScopedThreadCount(const ScopedThreadCount&) = delete;
  ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

 private:
  std::size_t previous_;
};

}  // namespace ultra
