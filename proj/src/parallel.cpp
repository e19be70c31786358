#include "geoforest/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace geoforest {

int jobs_from_environment() {
  const char* env = std::getenv("GEODESIC_FOREST_JOBS");
  if (!env || !*env) return 0;
  try {
    const int v = std::stoi(env);
    return v > 0 ? v : 0;
  } catch (...) {
    return 0;
  }
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const int env = jobs_from_environment(); env > 0) return env;
  return omp_get_max_threads();
}

}  // namespace geoforest
