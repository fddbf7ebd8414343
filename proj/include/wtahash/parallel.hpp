#pragma once

// Deterministic parallel reductions. Work is cut on a fixed chunk grid and
// partials are combined serially in chunk order, so the result is bitwise
// identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wtahash::detail {

constexpr std::size_t kReduceChunk = 4096;

// partial(lo, hi) -> double over the half-open index range [lo, hi).
template <typename F>
double chunked_sum(std::size_t n, F&& partial) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> parts(nchunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
    const std::size_t lo = static_cast<std::size_t>(ci) * kReduceChunk;
    const std::size_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
    parts[static_cast<std::size_t>(ci)] = partial(lo, hi);
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace wtahash::detail
