#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace oflx {

/// Number of workers used by parallel loops. Reads OFLX_THREADS once
/// (values < 1 fall back to the hardware count); can be overridden
/// programmatically, 0 restores the automatic choice.
int worker_count();
void set_worker_count(int n);

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on the
/// worker pool. Chunk boundaries depend only on n, never on the worker
/// count, and workers write disjoint output ranges, so results are
/// bit-identical for any OFLX_THREADS.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Deterministic cascade (pairwise) sum: the reduction tree is a fixed
/// function of the length, independent of the worker count.
double pairwise_sum(std::span<const double> v);

}  // namespace oflx
