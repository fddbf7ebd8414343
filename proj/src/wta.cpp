#include "wtahash/wta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wtahash {

namespace detail {

namespace {
struct Candidate {
  double value;
  std::uint32_t index;
};
// Heap order: the weakest candidate sits at the front. Among equal values
// the one with the larger index is weaker, which is what keeps the
// lowest-index winner on boundary ties.
inline bool heap_less(const Candidate& a, const Candidate& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}
}  // namespace

void top_k_select(const double* values, std::size_t n, std::uint32_t k, std::uint32_t* out) {
  if (k == n) {
    for (std::uint32_t i = 0; i < k; ++i) out[i] = i;
    return;
  }
  thread_local std::vector<Candidate> heap;
  heap.clear();
  heap.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) heap.push_back({values[i], i});
  std::make_heap(heap.begin(), heap.end(), heap_less);
  // Scanning in ascending index order means an incoming tie never displaces
  // the held candidate, so strict > is the whole rule.
  for (std::size_t i = k; i < n; ++i) {
    if (values[i] > heap.front().value) {
      std::pop_heap(heap.begin(), heap.end(), heap_less);
      heap.back() = {values[i], static_cast<std::uint32_t>(i)};
      std::push_heap(heap.begin(), heap.end(), heap_less);
    }
  }
  for (std::uint32_t i = 0; i < k; ++i) out[i] = heap[i].index;
  std::sort(out, out + k);
}

void project_into(const BinaryCodeMatrix& w, std::span<const float> x, std::span<double> out) {
  const std::size_t d_out = w.rows();
  for (std::size_t i = 0; i < d_out; ++i) {
    double acc = 0.0;
    for (std::uint32_t j : w.slot_indices(i)) acc += static_cast<double>(x[j]);
    out[i] = acc;
  }
}

}  // namespace detail

std::vector<std::uint32_t> wta_indices(std::span<const double> x, std::uint32_t k) {
  if (k < 1 || k > x.size())
    throw std::invalid_argument("wta: k must be in [1, input length]");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("wta: non-finite input entry");
  std::vector<std::uint32_t> out(k);
  detail::top_k_select(x.data(), x.size(), k, out.data());
  return out;
}

std::vector<std::uint8_t> wta(std::span<const double> x, std::uint32_t k) {
  std::vector<std::uint8_t> mask(x.size(), 0);
  for (std::uint32_t i : wta_indices(x, k)) mask[i] = 1;
  return mask;
}

std::vector<double> project(const BinaryCodeMatrix& w, std::span<const float> x) {
  if (w.axis() != BitAxis::kPerRow)
    throw std::invalid_argument("project: projection matrix must be per-row fixed weight");
  if (w.cols() != x.size())
    throw std::invalid_argument("project: dimension mismatch");
  std::vector<double> out(w.rows());
  detail::project_into(w, x, out);
  return out;
}

std::vector<std::uint32_t> hash_indices(const BinaryCodeMatrix& w, std::span<const float> x,
                                        std::uint32_t k) {
  std::vector<double> proj = project(w, x);
  if (k < 1 || k > proj.size())
    throw std::invalid_argument("hash: k must be in [1, d_out]");
  std::vector<std::uint32_t> out(k);
  detail::top_k_select(proj.data(), proj.size(), k, out.data());
  return out;
}

BinaryCodeMatrix hash_columns(const BinaryCodeMatrix& w, const DenseMatrix& x, std::uint32_t k,
                              HashStats* stats) {
  if (w.axis() != BitAxis::kPerRow)
    throw std::invalid_argument("hash_columns: projection matrix must be per-row fixed weight");
  if (w.cols() != x.rows())
    throw std::invalid_argument("hash_columns: dimension mismatch");
  const std::size_t d_out = w.rows();
  if (k < 1 || k > d_out)
    throw std::invalid_argument("hash_columns: k must be in [1, d_out]");

  const std::size_t n = x.cols();
  std::vector<std::uint32_t> indices(n * k);
  if (stats) {
    stats->selected_sum.assign(n, 0.0);
    stats->total_sum.assign(n, 0.0);
  }

#pragma omp parallel
  {
    std::vector<double> proj(d_out);
#pragma omp for schedule(static)
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(n); ++m) {
      detail::project_into(w, x.col(static_cast<std::size_t>(m)), proj);
      std::uint32_t* out = indices.data() + static_cast<std::size_t>(m) * k;
      detail::top_k_select(proj.data(), d_out, k, out);
      if (stats) {
        double sel = 0.0, tot = 0.0;
        for (std::uint32_t i = 0; i < k; ++i) sel += proj[out[i]];
        for (double v : proj) tot += v;
        stats->selected_sum[static_cast<std::size_t>(m)] = sel;
        stats->total_sum[static_cast<std::size_t>(m)] = tot;
      }
    }
  }
  return BinaryCodeMatrix(d_out, n, k, BitAxis::kPerColumn, std::move(indices));
}

}  // namespace wtahash
