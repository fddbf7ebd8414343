#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wtahash/model.hpp"
#include "wtahash/reference.hpp"
#include "wtahash/rng.hpp"
#include "wtahash/wta.hpp"

using namespace wtahash;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, bool allow_ties) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.next_uniform(-1.0, 1.0);
  if (allow_ties && n > 1) {
    // duplicate a handful of values to exercise the tie rule
    for (std::size_t i = 0; i + 1 < n; i += 3) x[i + 1] = x[i];
  }
  return x;
}

BinaryCodeMatrix random_rows(Rng& rng, std::uint32_t d_out, std::uint32_t d, std::uint32_t c) {
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(d_out) * c);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < d_out; ++i) sample_subset_into(rng, d, c, pool, idx.data() + i * c);
  return BinaryCodeMatrix(d_out, d, c, BitAxis::kPerRow, std::move(idx));
}

}  // namespace

TEST_CASE("wta picks the stated examples") {
  CHECK(wta(std::vector<double>{0.1, 0.9, 0.5, 0.3}, 2) ==
        std::vector<std::uint8_t>{0, 1, 1, 0});
  // boundary tie: the lowest indices win
  CHECK(wta(std::vector<double>{1.0, 1.0, 1.0, 0.0}, 2) ==
        std::vector<std::uint8_t>{1, 1, 0, 0});
  CHECK(wta(std::vector<double>{-3.0, -1.0, -2.0}, 1) == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("wta rejects bad arguments") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  CHECK_THROWS_AS((void)wta(x, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)wta(x, 4), std::invalid_argument);
  const std::vector<double> bad{1.0, std::nan(""), 0.0};
  CHECK_THROWS_AS((void)wta(bad, 1), std::invalid_argument);
  const std::vector<double> inf{1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS((void)wta(inf, 1), std::invalid_argument);
}

TEST_CASE("wta properties over randomized trials") {
  Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.next_below(64));
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(n));
    const bool ties = rng.next_unit() < 0.5;
    const std::vector<double> x = random_vector(rng, n, ties);

    const auto mask = wta(x, k);
    // cardinality
    std::uint32_t ones = 0;
    for (auto b : mask) ones += b;
    REQUIRE(ones == k);
    // dominance: min selected >= max unselected
    double min_sel = 1e300, max_unsel = -1e300;
    for (std::size_t i = 0; i < n; ++i)
      (mask[i] ? min_sel = std::min(min_sel, x[i]) : max_unsel = std::max(max_unsel, x[i]));
    if (k < n) REQUIRE(min_sel >= max_unsel);
    // agreement with the serial reference, including the tie rule
    REQUIRE(mask == reference::wta(x, k));
  }
}

TEST_CASE("wta is invariant to positive scaling of distinct inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next_below(40));
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(n));
    std::vector<double> x = random_vector(rng, n, false);
    const double alpha = std::exp(rng.next_uniform(-3.0, 3.0));
    std::vector<double> scaled = x;
    for (auto& v : scaled) v *= alpha;
    CHECK(wta(x, k) == wta(scaled, k));
  }
}

TEST_CASE("wta commutes with permutations on distinct inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next_below(40));
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(n));
    const std::vector<double> x = random_vector(rng, n, false);
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
    for (std::uint32_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);

    std::vector<double> permuted(n);
    for (std::uint32_t i = 0; i < n; ++i) permuted[i] = x[perm[i]];
    const auto direct = wta(permuted, k);
    const auto base = wta(x, k);
    for (std::uint32_t i = 0; i < n; ++i) CHECK(direct[i] == base[perm[i]]);
  }
}

TEST_CASE("project sums the selected coordinates") {
  // rows {1,1,0}, {0,1,1}, c = 2
  BinaryCodeMatrix w(2, 3, 2, BitAxis::kPerRow, {0, 1, 1, 2});
  const std::vector<float> x{1.0f, 2.0f, 3.0f};
  CHECK(project(w, x) == std::vector<double>{3.0, 5.0});

  const std::vector<float> zero{0.0f, 0.0f, 0.0f};
  CHECK(project(w, zero) == std::vector<double>{0.0, 0.0});

  const std::vector<float> short_x{1.0f};
  CHECK_THROWS_AS((void)project(w, short_x), std::invalid_argument);
}

TEST_CASE("project equals the dense matrix-vector oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.next_below(16));
    const std::uint32_t d_out = 1 + static_cast<std::uint32_t>(rng.next_below(12));
    const std::uint32_t c = 1 + static_cast<std::uint32_t>(rng.next_below(d));
    const BinaryCodeMatrix w = random_rows(rng, d_out, d, c);
    std::vector<float> x(d);
    for (auto& v : x) v = static_cast<float>(rng.next_uniform(-2.0, 2.0));
    CHECK(project(w, x) == reference::project_dense(w, x));
  }
}

TEST_CASE("hash composes projection and competition") {
  // identity-like rows: row i selects input i
  BinaryCodeMatrix w(3, 3, 1, BitAxis::kPerRow, {0, 1, 2});
  const std::vector<float> x{5.0f, 1.0f, 9.0f};
  CHECK(hash_indices(w, x, 1) == std::vector<std::uint32_t>{2});

  // determinism
  Rng rng(9);
  const BinaryCodeMatrix wr = random_rows(rng, 5, 8, 3);
  std::vector<float> xr(8);
  for (auto& v : xr) v = static_cast<float>(rng.next_uniform(-1.0, 1.0));
  CHECK(hash_indices(wr, xr, 2) == hash_indices(wr, xr, 2));
}

TEST_CASE("hash matches the two-step composition oracle") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.next_below(10));
    const std::uint32_t d_out = 2 + static_cast<std::uint32_t>(rng.next_below(8));
    const std::uint32_t c = 1 + static_cast<std::uint32_t>(rng.next_below(d));
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(d_out));
    const BinaryCodeMatrix w = random_rows(rng, d_out, d, c);
    std::vector<float> x(d);
    for (auto& v : x) v = static_cast<float>(rng.next_uniform(-1.0, 1.0));

    const auto got = hash_indices(w, x, k);
    const auto expect = reference::wta(reference::project_dense(w, x), k);
    std::vector<std::uint8_t> mask(d_out, 0);
    for (auto i : got) mask[i] = 1;
    CHECK(mask == expect);
  }
}

TEST_CASE("hash_columns is independent of the worker count") {
#ifdef _OPENMP
  Rng rng(17);
  const BinaryCodeMatrix w = random_rows(rng, 40, 30, 4);
  DenseMatrix x(30, 200);
  for (auto& v : x.values()) v = static_cast<float>(rng.next_uniform(-1.0, 1.0));

  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const BinaryCodeMatrix codes1 = hash_columns(w, x, 5);
  omp_set_num_threads(2);
  const BinaryCodeMatrix codes2 = hash_columns(w, x, 5);
  omp_set_num_threads(4);
  const BinaryCodeMatrix codes4 = hash_columns(w, x, 5);
  omp_set_num_threads(before);
  CHECK(codes1 == codes2);
  CHECK(codes1 == codes4);
#endif
}

TEST_CASE("fixed-weight matrix rejects malformed index lists") {
  CHECK_THROWS_AS(BinaryCodeMatrix(4, 2, 2, BitAxis::kPerColumn, {0, 0, 1, 2}),
                  std::invalid_argument);  // not ascending
  CHECK_THROWS_AS(BinaryCodeMatrix(4, 2, 2, BitAxis::kPerColumn, {0, 4, 1, 2}),
                  std::invalid_argument);  // out of range
  CHECK_THROWS_AS(BinaryCodeMatrix(4, 2, 2, BitAxis::kPerColumn, {0, 1, 2}),
                  std::invalid_argument);  // wrong count
  CHECK_THROWS_AS(BinaryCodeMatrix(4, 2, 5, BitAxis::kPerColumn, {}),
                  std::invalid_argument);  // weight above slot length
}

TEST_CASE("fixed-weight matrix exposes bits, words and hamming distances") {
  BinaryCodeMatrix y(70, 2, 2, BitAxis::kPerColumn, {0, 65, 1, 65});
  CHECK(y.bit(0, 0));
  CHECK(y.bit(65, 0));
  CHECK_FALSE(y.bit(1, 0));
  CHECK(y.bit(1, 1));
  CHECK(y.hamming(0, 1) == 2);
  CHECK(y.hamming(0, 0) == 0);
  CHECK(y.words_per_slot() == 2);
}

TEST_CASE("require_finite names the offending entry") {
  DenseMatrix m(2, 2, 1.0f);
  m(1, 1) = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_WITH_AS(require_finite(m, "input"), doctest::Contains("row 1"),
                       std::invalid_argument);
  m(1, 1) = 0.5f;
  CHECK_NOTHROW(require_finite(m, "input"));
}

TEST_CASE("model config applies the default row weight") {
  ModelConfig cfg;
  cfg.d = 250;
  cfg.d_out = 500;
  cfg.k = 4;
  CHECK(cfg.resolved().c == 25);
  cfg.c = 7;
  CHECK(cfg.resolved().c == 7);
  cfg.c = 0;
  cfg.d = 5;  // floor(0.1 * 5) = 0 clamps to 1
  cfg.d_out = 8;
  CHECK(cfg.resolved().c == 1);
  cfg.k = 8;
  CHECK_THROWS_AS((void)cfg.resolved(), std::invalid_argument);  // k >= d_out
}
