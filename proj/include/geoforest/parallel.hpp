#pragma once

#include <exception>
#include <mutex>

namespace geoforest {

/// Worker count for OpenMP regions. jobs <= 0 means "available parallelism",
/// which honors GEODESIC_FOREST_JOBS when set.
int resolve_jobs(int jobs);

/// Value of GEODESIC_FOREST_JOBS, or 0 when unset/invalid.
int jobs_from_environment();

/// Exceptions must not escape an OpenMP region; loop bodies run through
/// `capture` and the first failure is rethrown after the region ends.
class ExceptionCollector {
 public:
  template <typename F>
  void capture(F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

}  // namespace geoforest
