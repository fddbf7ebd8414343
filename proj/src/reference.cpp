#include "wtahash/reference.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace wtahash::reference {

std::vector<std::uint8_t> wta(std::span<const double> x, std::uint32_t k) {
  if (k < 1 || k > x.size()) throw std::invalid_argument("reference::wta: bad k");
  std::vector<std::uint32_t> order(x.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return x[a] > x[b]; });
  std::vector<std::uint8_t> mask(x.size(), 0);
  for (std::uint32_t i = 0; i < k; ++i) mask[order[i]] = 1;
  return mask;
}

std::vector<double> project_dense(const BinaryCodeMatrix& w, std::span<const float> x) {
  std::vector<double> dense(w.rows() * w.cols(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::uint32_t j : w.slot_indices(i)) dense[i * w.cols() + j] = 1.0;
  std::vector<double> out(w.rows(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j)
      out[i] += dense[i * w.cols() + j] * static_cast<double>(x[j]);
  return out;
}

ScoreMatrix score_vectors(const DenseMatrix& x, const BinaryCodeMatrix& y) {
  const std::size_t d = x.rows();
  const std::size_t n = x.cols();
  const std::size_t d_out = y.rows();
  const double shift = static_cast<double>(y.weight()) / static_cast<double>(d_out);
  ScoreMatrix scores(d, d_out, 0.0);
  for (std::size_t i = 0; i < d_out; ++i)
    for (std::size_t m = 0; m < n; ++m) {
      const double coef = (y.bit(i, m) ? 1.0 : 0.0) - shift;
      for (std::size_t r = 0; r < d; ++r)
        scores(r, i) += static_cast<double>(x(r, m)) * coef;
    }
  return scores;
}

double objective(const BinaryCodeMatrix& w, const DenseMatrix& x, const BinaryCodeMatrix& y) {
  const std::size_t n = x.cols();
  const std::size_t d_out = w.rows();
  double total = 0.0;
  std::vector<double> response(d_out);
  for (std::size_t m = 0; m < n; ++m) {
    const auto xm = x.col(m);
    for (std::size_t i = 0; i < d_out; ++i) {
      double dot = 0.0;
      for (std::uint32_t j : w.slot_indices(i)) dot += static_cast<double>(xm[j]);
      response[i] = dot;
    }
    for (std::size_t i = 0; i < d_out; ++i)
      for (std::size_t j = 0; j < d_out; ++j) {
        const double yi = y.bit(i, m) ? 1.0 : 0.0;
        const double yj = y.bit(j, m) ? 1.0 : 0.0;
        total += yi * (1.0 - yj) * (response[i] - response[j]);
      }
  }
  return total;
}

namespace {
// Next c-combination of {0..n-1} in lexicographic order; false when done.
bool next_combination(std::vector<std::uint32_t>& comb, std::uint32_t n) {
  const std::uint32_t c = static_cast<std::uint32_t>(comb.size());
  std::uint32_t i = c;
  while (i-- > 0) {
    if (comb[i] + (c - i) <= n - 1 + 0u) {
      ++comb[i];
      for (std::uint32_t j = i + 1; j < c; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}
}  // namespace

BinaryCodeMatrix best_rows_exhaustive(const DenseMatrix& x, const BinaryCodeMatrix& y,
                                      std::uint32_t c) {
  const std::size_t d = x.rows();
  const std::size_t d_out = y.rows();
  const ScoreMatrix scores = score_vectors(x, y);

  std::vector<std::uint32_t> rows(d_out * c);
  for (std::size_t i = 0; i < d_out; ++i) {
    std::vector<std::uint32_t> comb(c);
    std::iota(comb.begin(), comb.end(), 0u);
    std::vector<std::uint32_t> best = comb;
    double best_score = -1e300;
    do {
      double s = 0.0;
      for (std::uint32_t j : comb) s += scores(j, i);
      if (s > best_score) {
        best_score = s;
        best = comb;
      }
    } while (next_combination(comb, static_cast<std::uint32_t>(d)));
    std::copy(best.begin(), best.end(), rows.begin() + i * c);
  }
  return BinaryCodeMatrix(d_out, d, c, BitAxis::kPerRow, std::move(rows));
}

namespace {
std::vector<std::int32_t> select_rows(std::size_t n, std::uint32_t r,
                                      const std::vector<double>& dist_matrix) {
  std::vector<std::int32_t> out(n * r);
  std::vector<std::uint32_t> order(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::iota(order.begin(), order.end(), 0u);
    const double* dq = dist_matrix.data() + q * n;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return dq[a] < dq[b]; });
    std::size_t written = 0;
    for (std::size_t p = 0; p < n && written < r; ++p) {
      if (order[p] == q) continue;
      out[q * r + written++] = static_cast<std::int32_t>(order[p]);
    }
  }
  return out;
}
}  // namespace

std::vector<std::int32_t> euclidean_neighbors(const DenseMatrix& x, std::uint32_t r) {
  const std::size_t n = x.cols();
  if (r >= n) throw std::invalid_argument("reference::euclidean_neighbors: r >= n");
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t rr = 0; rr < x.rows(); ++rr) {
        const double diff = static_cast<double>(x(rr, a)) - static_cast<double>(x(rr, b));
        s += diff * diff;
      }
      dist[a * n + b] = s;
    }
  return select_rows(n, r, dist);
}

std::vector<std::int32_t> hamming_neighbors(const BinaryCodeMatrix& codes, std::uint32_t r) {
  const std::size_t n = codes.cols();
  if (r >= n) throw std::invalid_argument("reference::hamming_neighbors: r >= n");
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::uint64_t h = 0;
      for (std::size_t rr = 0; rr < codes.rows(); ++rr)
        h += codes.bit(rr, a) != codes.bit(rr, b) ? 1 : 0;
      dist[a * n + b] = static_cast<double>(h);
    }
  return select_rows(n, r, dist);
}

}  // namespace wtahash::reference
