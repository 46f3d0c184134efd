#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace kolmonet {

/// Worker count: KOLMONET_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(begin, end) on disjoint ranges covering [0, count). Callers
/// write results to per-index slots, so the outcome never depends on how
/// ranges are distributed over threads.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace kolmonet
