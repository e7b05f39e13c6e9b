#pragma once

#include <cstddef>
#include <functional>

namespace trpca {

// Cap on worker threads for per-slice loops. 1 (the default) runs inline.
void set_max_threads(std::size_t n);
std::size_t max_threads();

// Runs body(k) for k in [0, count). Iterations must be independent; each
// writes only its own outputs, so results do not depend on scheduling.
// The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace trpca
