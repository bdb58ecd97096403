#pragma once

namespace sandlab {

// Applies the SANDLAB_THREADS cap (if set) to the OpenMP runtime and
// returns the number of threads parallel regions will use.
int configure_threads();

int max_threads();

}  // namespace sandlab
