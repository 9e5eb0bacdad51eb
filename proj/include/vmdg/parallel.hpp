#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace vmdg {

/// Number of worker threads used by cell loops. Reads VM_RKDG_THREADS once;
/// falls back to std::thread::hardware_concurrency().
int worker_count();

/// Overrides the worker count (0 restores the environment default).
void set_worker_count(int n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited exactly once and chunk boundaries depend only on n and the
/// worker count, so bodies writing to disjoint slots are deterministic.
void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

/// Pairwise (cascade) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

}  // namespace vmdg
