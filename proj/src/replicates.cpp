#include "rrt/replicates.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace rrt {

int default_workers() {
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("RRT_LDP_THREADS")) {
    int cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && *ptr == '\0' && cap > 0 && cap < workers) workers = cap;
  }
  return workers < 1 ? 1 : workers;
}

}  // namespace rrt
