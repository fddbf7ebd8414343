#include "wtahash/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wtahash::linalg {

namespace {

constexpr std::size_t kPanel = 256;     // inner-dimension panel for axpy kernels
constexpr std::size_t kColBlock = 64;   // output-column block for dot kernels

// c = a * b via per-output-column axpy accumulation. The inner dimension is
// swept panel by panel in a fixed order, so every output entry sees the same
// addition sequence for any thread count.
template <typename AT>
ScoreMatrix matmul_ab_impl(const Matrix<AT>& a, const ScoreMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul_ab: dimension mismatch");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  ScoreMatrix c(m, n, 0.0);
  for (std::size_t k0 = 0; k0 < k; k0 += kPanel) {
    const std::size_t k1 = k0 + kPanel < k ? k0 + kPanel : k;
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(n); ++j) {
      auto cj = c.col(static_cast<std::size_t>(j));
      const auto bj = b.col(static_cast<std::size_t>(j));
      for (std::size_t kk = k0; kk < k1; ++kk) {
        const double beta = bj[kk];
        if (beta == 0.0) continue;
        const auto ak = a.col(kk);
        for (std::size_t r = 0; r < m; ++r) cj[r] += beta * static_cast<double>(ak[r]);
      }
    }
  }
  return c;
}

// c = a^T * b via independent dot products, blocked over b's columns so the
// active block stays cache resident.
template <typename AT, typename BT>
ScoreMatrix matmul_atb_impl(const Matrix<AT>& a, const Matrix<BT>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_atb: dimension mismatch");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  ScoreMatrix c(m, n, 0.0);
  for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
    const std::size_t j1 = j0 + kColBlock < n ? j0 + kColBlock : n;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
      const auto ai = a.col(static_cast<std::size_t>(i));
      for (std::size_t j = j0; j < j1; ++j) {
        const auto bj = b.col(j);
        double acc = 0.0;
        for (std::size_t kk = 0; kk < k; ++kk)
          acc += static_cast<double>(ai[kk]) * static_cast<double>(bj[kk]);
        c(static_cast<std::size_t>(i), j) = acc;
      }
    }
  }
  return c;
}

}  // namespace

ScoreMatrix matmul_ab(const DenseMatrix& a, const ScoreMatrix& b) { return matmul_ab_impl(a, b); }
ScoreMatrix matmul_ab(const ScoreMatrix& a, const ScoreMatrix& b) { return matmul_ab_impl(a, b); }
ScoreMatrix matmul_atb(const ScoreMatrix& a, const DenseMatrix& b) { return matmul_atb_impl(a, b); }
ScoreMatrix matmul_atb(const ScoreMatrix& a, const ScoreMatrix& b) { return matmul_atb_impl(a, b); }

ScoreMatrix gram_bt(const ScoreMatrix& b) {
  const std::size_t s = b.rows(), n = b.cols();
  ScoreMatrix c(s, s, 0.0);
  for (std::size_t m0 = 0; m0 < n; m0 += kPanel) {
    const std::size_t m1 = m0 + kPanel < n ? m0 + kPanel : n;
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(s); ++j) {
      auto cj = c.col(static_cast<std::size_t>(j));
      for (std::size_t m = m0; m < m1; ++m) {
        const auto bm = b.col(m);
        const double beta = bm[static_cast<std::size_t>(j)];
        if (beta == 0.0) continue;
        for (std::size_t r = 0; r < s; ++r) cj[r] += beta * bm[r];
      }
    }
  }
  return c;
}

void orthonormalize_columns(ScoreMatrix& q) {
  const std::size_t d = q.rows(), s = q.cols();
  std::vector<double> original_norm(s, 0.0);
  for (std::size_t j = 0; j < s; ++j) {
    const auto col = q.col(j);
    double acc = 0.0;
    for (double v : col) acc += v * v;
    original_norm[j] = std::sqrt(acc);
  }

  std::vector<double> h(s, 0.0);
  for (std::size_t j = 0; j < s; ++j) {
    auto v = q.col(j);
    // Classical Gram-Schmidt with one reorthogonalization pass (CGS2). The
    // projection coefficients are independent dot products, so they run in
    // parallel; the subtraction walks previous columns in a fixed order.
    for (int pass = 0; pass < 2 && j > 0; ++pass) {
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < static_cast<std::int64_t>(j); ++p) {
        const auto qp = q.col(static_cast<std::size_t>(p));
        double acc = 0.0;
        for (std::size_t r = 0; r < d; ++r) acc += qp[r] * v[r];
        h[static_cast<std::size_t>(p)] = acc;
      }
      const std::size_t chunk = 2048;
#pragma omp parallel for schedule(static)
      for (std::int64_t c0 = 0; c0 < static_cast<std::int64_t>((d + chunk - 1) / chunk); ++c0) {
        const std::size_t lo = static_cast<std::size_t>(c0) * chunk;
        const std::size_t hi = lo + chunk < d ? lo + chunk : d;
        for (std::size_t p = 0; p < j; ++p) {
          const double hp = h[p];
          if (hp == 0.0) continue;
          const auto qp = q.col(p);
          for (std::size_t r = lo; r < hi; ++r) v[r] -= hp * qp[r];
        }
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < d; ++r) norm += v[r] * v[r];
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * original_norm[j] || norm == 0.0) {
      for (std::size_t r = 0; r < d; ++r) v[r] = 0.0;  // rank-deficient direction
    } else {
      const double inv = 1.0 / norm;
      for (std::size_t r = 0; r < d; ++r) v[r] *= inv;
    }
  }
}

void jacobi_eigh(ScoreMatrix& a, std::vector<double>& values, ScoreMatrix& vectors) {
  const std::size_t s = a.rows();
  if (s != a.cols()) throw std::invalid_argument("jacobi_eigh: matrix must be square");
  vectors = ScoreMatrix(s, s, 0.0);
  for (std::size_t i = 0; i < s; ++i) vectors(i, i) = 1.0;

  double frob = 0.0;
  for (double v : a.values()) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = 1e-13 * (frob > 0.0 ? frob : 1.0);

  const int max_sweeps = 50;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < s; ++p)
      for (std::size_t q = p + 1; q < s; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p < s; ++p) {
      for (std::size_t q = p + 1; q < s; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cos = 1.0 / std::sqrt(t * t + 1.0);
        const double sin = t * cos;

        for (std::size_t r = 0; r < s; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = cos * arp - sin * arq;
          a(r, q) = sin * arp + cos * arq;
        }
        for (std::size_t r = 0; r < s; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = cos * apr - sin * aqr;
          a(q, r) = sin * apr + cos * aqr;
        }
        for (std::size_t r = 0; r < s; ++r) {
          const double vrp = vectors(r, p), vrq = vectors(r, q);
          vectors(r, p) = cos * vrp - sin * vrq;
          vectors(r, q) = sin * vrp + cos * vrq;
        }
      }
    }
  }

  values.resize(s);
  for (std::size_t i = 0; i < s; ++i) values[i] = a(i, i);

  // Sort descending, permuting the eigenvector columns to match.
  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  std::vector<double> sorted_values(s);
  ScoreMatrix sorted_vectors(s, s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    sorted_values[i] = values[order[i]];
    const auto src = vectors.col(order[i]);
    auto dst = sorted_vectors.col(i);
    for (std::size_t r = 0; r < s; ++r) dst[r] = src[r];
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace wtahash::linalg
