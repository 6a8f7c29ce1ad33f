#pragma once

#include <cstddef>
#include <functional>

namespace fracheat {

// Worker count: hardware concurrency, capped by FRACHEAT_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n). Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracheat
