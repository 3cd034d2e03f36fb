#pragma once

#include <cstddef>
#include <functional>

namespace hetsim {

/// Runs fn(0..n-1) on up to `threads` workers (threads <= 1 runs inline).
/// Items are claimed dynamically; callers must make each item independent.
/// The exception of the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace hetsim
