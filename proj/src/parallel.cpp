#include "sandlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "sandlab/errors.hpp"

namespace sandlab {

int configure_threads() {
  if (const char* env = std::getenv("SANDLAB_THREADS"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InputError(std::string("SANDLAB_THREADS must be a positive integer, got '") + env + "'");
    if (v < omp_get_max_threads()) omp_set_num_threads(static_cast<int>(v));
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace sandlab
