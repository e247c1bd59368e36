#pragma once

#include <cstddef>
#include <functional>

namespace levy {

/// Worker count: LEVY_LIOUVILLE_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// processed exactly once and results must be written per index, so output
/// does not depend on the number of workers.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace levy
