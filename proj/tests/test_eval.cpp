#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wtahash/datagen.hpp"
#include "wtahash/eval.hpp"
#include "wtahash/reference.hpp"
#include "wtahash/rng.hpp"

using namespace wtahash;

namespace {

DenseMatrix random_dense(Rng& rng, std::size_t d, std::size_t n) {
  DenseMatrix x(d, n);
  for (auto& v : x.values()) v = static_cast<float>(rng.next_uniform(-1.0, 1.0));
  return x;
}

BinaryCodeMatrix random_codes(Rng& rng, std::uint32_t d_out, std::size_t n, std::uint32_t k) {
  std::vector<std::uint32_t> idx(n * k);
  std::vector<std::uint32_t> pool;
  for (std::size_t m = 0; m < n; ++m) sample_subset_into(rng, d_out, k, pool, idx.data() + m * k);
  return BinaryCodeMatrix(d_out, n, k, BitAxis::kPerColumn, std::move(idx));
}

}  // namespace

TEST_CASE("ground truth on collinear points") {
  DenseMatrix x = DenseMatrix::from_values(1, 3, {0.0f, 1.0f, 3.0f});
  const NeighborTable t = ground_truth(x, 1);
  CHECK(t.row(0)[0] == 1);  // nearest to 0 is 1
  CHECK(t.row(1)[0] == 0);  // nearest to 1 is 0 (distance tie rule not needed: 1 < 2)
  CHECK(t.row(2)[0] == 1);  // nearest to 3 is 1
}

TEST_CASE("duplicated points are mutual nearest neighbors") {
  DenseMatrix x = DenseMatrix::from_values(2, 4, {5, 5, 1, 1, 5, 5, 9, 9});
  const NeighborTable t = ground_truth(x, 1);
  CHECK(t.row(0)[0] == 2);  // columns 0 and 2 coincide
  CHECK(t.row(2)[0] == 0);
}

TEST_CASE("ground truth matches the full-sort oracle") {
  Rng rng(61);
  DenseMatrix x = random_dense(rng, 50, 100);
  const NeighborTable t = ground_truth(x, 10);
  CHECK(t.indices == reference::euclidean_neighbors(x, 10));

  // table invariants: no self hits, unique indices, in range
  for (std::size_t q = 0; q < t.n_queries; ++q) {
    std::set<std::int32_t> seen;
    for (std::int32_t i : t.row(q)) {
      CHECK(i != static_cast<std::int32_t>(q));
      CHECK(i >= 0);
      CHECK(i < 100);
      seen.insert(i);
    }
    CHECK(seen.size() == 10);
  }
}

TEST_CASE("ground truth rejects r at or above the corpus size") {
  Rng rng(62);
  DenseMatrix x = random_dense(rng, 3, 5);
  CHECK_THROWS_AS((void)ground_truth(x, 5), std::invalid_argument);
  CHECK_NOTHROW((void)ground_truth(x, 4));
}

TEST_CASE("hamming neighbors match the naive oracle") {
  Rng rng(63);
  const BinaryCodeMatrix codes = random_codes(rng, 96, 80, 7);
  const NeighborTable t = output_neighbors(codes, 9);
  CHECK(t.indices == reference::hamming_neighbors(codes, 9));
}

TEST_CASE("identical codes sit at distance zero and find each other") {
  std::vector<std::uint32_t> idx{0, 3, 0, 3, 1, 4};  // columns 0 and 1 identical
  const BinaryCodeMatrix codes(6, 3, 2, BitAxis::kPerColumn, std::move(idx));
  const NeighborTable t = output_neighbors(codes, 1);
  CHECK(t.row(0)[0] == 1);
  CHECK(t.row(1)[0] == 0);
}

TEST_CASE("fixed-weight codes: hamming ranking equals euclidean ranking") {
  Rng rng(64);
  const BinaryCodeMatrix codes = random_codes(rng, 64, 120, 6);
  DenseMatrix dense(64, 120, 0.0f);
  for (std::size_t m = 0; m < 120; ++m)
    for (std::uint32_t i : codes.slot_indices(m)) dense(i, m) = 1.0f;
  const NeighborTable hamming = output_neighbors(codes, 15);
  const NeighborTable euclid = output_neighbors(dense, 15);
  CHECK(hamming.indices == euclid.indices);
}

TEST_CASE("overlap accuracy: boundary values and symmetry") {
  NeighborTable a, b;
  a.n_queries = b.n_queries = 2;
  a.top_r = b.top_r = 4;
  a.indices = {1, 2, 3, 4, 5, 6, 7, 8};
  b.indices = a.indices;
  CHECK(overlap_accuracy(a, b) == 1.0);

  b.indices = {9, 10, 11, 12, 9, 10, 11, 12};
  CHECK(overlap_accuracy(a, b) == 0.0);

  b.indices = {1, 2, 11, 12, 5, 6, 13, 14};  // half shared per row
  CHECK(overlap_accuracy(a, b) == 0.5);
  CHECK(overlap_accuracy(a, b) == overlap_accuracy(b, a));

  NeighborTable c;
  c.n_queries = 2;
  c.top_r = 3;
  c.indices = {1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS((void)overlap_accuracy(a, c), std::invalid_argument);
}

TEST_CASE("identity outputs reduce to input-space self-comparison") {
  // when the output representation is the input itself, the output-space
  // search must recover the ground truth exactly
  Rng rng(68);
  DenseMatrix x = random_dense(rng, 12, 90);
  const NeighborTable gt = ground_truth(x, 10);
  const NeighborTable found = output_neighbors(x, 10);
  CHECK(overlap_accuracy(gt, found) == 1.0);
}

TEST_CASE("ground truth commutes with reordering the corpus") {
  Rng rng(69);
  const std::size_t n = 70;
  DenseMatrix x = random_dense(rng, 8, n);
  const NeighborTable base = ground_truth(x, 7);

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
  DenseMatrix shuffled(8, n);
  for (std::size_t j = 0; j < n; ++j)
    std::copy(x.col(perm[j]).begin(), x.col(perm[j]).end(), shuffled.col(j).begin());

  // random reals make distance ties vanishingly unlikely, so the permuted
  // table must map back exactly
  const NeighborTable moved = ground_truth(shuffled, 7);
  std::vector<std::size_t> inverse(n);
  for (std::size_t j = 0; j < n; ++j) inverse[perm[j]] = j;
  for (std::size_t q = 0; q < n; ++q) {
    const auto expect = base.row(perm[q]);
    const auto got = moved.row(q);
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(static_cast<std::size_t>(got[i]) == inverse[expect[i]]);
  }
}

TEST_CASE("ground truth is independent of the worker count") {
#ifdef _OPENMP
  Rng rng(65);
  DenseMatrix x = random_dense(rng, 20, 150);
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const NeighborTable t1 = ground_truth(x, 12);
  omp_set_num_threads(4);
  const NeighborTable t4 = ground_truth(x, 12);
  omp_set_num_threads(before);
  CHECK(t1.indices == t4.indices);
#endif
}

TEST_CASE("run_benchmark: deterministic per seed, algorithm dispatch, errors") {
  ArtfcSpec spec;
  spec.n_train = 150;
  spec.n_test = 150;
  spec.d = 30;
  spec.d_out = 80;
  spec.k = 4;
  spec.seed = 2;
  const ArtfcData data = generate_artfc(spec);

  BenchOptions opt;
  opt.k_values = {4};
  opt.top_r = 20;
  opt.repeats = 2;
  opt.seed = 5;
  opt.d_out = 80;
  opt.c = 3;
  const std::vector<Algorithm> algos{Algorithm::kSup,  Algorithm::kUnsup, Algorithm::kLsh,
                                     Algorithm::kFjl,  Algorithm::kFly,   Algorithm::kRandomCodes};
  const auto a = run_benchmark(data.train, data.test, algos, opt);
  const auto b = run_benchmark(data.train, data.test, algos, opt);
  REQUIRE(a.size() == algos.size() * 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].accuracy == b[i].accuracy);
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].algorithm == b[i].algorithm);
    CHECK(a[i].accuracy >= 0.0);
    CHECK(a[i].accuracy <= 1.0);
  }

  SUBCASE("supervised needs train codes") {
    Dataset no_codes = data.train;
    no_codes.y.reset();
    CHECK_THROWS_AS(
        (void)run_benchmark(no_codes, data.test, {Algorithm::kSup}, opt),
        std::invalid_argument);
  }
  SUBCASE("supervised needs codes at the requested hash length") {
    BenchOptions wrong = opt;
    wrong.k_values = {5};
    CHECK_THROWS_AS((void)run_benchmark(data.train, data.test, {Algorithm::kSup}, wrong),
                    std::invalid_argument);
  }
  SUBCASE("repeat count is capped") {
    BenchOptions wrong = opt;
    wrong.repeats = 51;
    CHECK_THROWS_AS((void)run_benchmark(data.train, data.test, {Algorithm::kFly}, wrong),
                    std::invalid_argument);
  }
  SUBCASE("top_r must fit the test corpus") {
    BenchOptions wrong = opt;
    wrong.top_r = 150;
    CHECK_THROWS_AS((void)run_benchmark(data.train, data.test, {Algorithm::kFly}, wrong),
                    std::invalid_argument);
  }
  SUBCASE("code algorithms need an output dimension") {
    BenchOptions wrong = opt;
    wrong.d_out = 0;
    CHECK_THROWS_AS((void)run_benchmark(data.train, data.test, {Algorithm::kFly}, wrong),
                    std::invalid_argument);
  }
}

TEST_CASE("random codes score near chance") {
  Rng rng(66);
  DenseMatrix x = random_dense(rng, 10, 400);
  Dataset train{x, std::nullopt, "t", ""};
  Dataset test{x, std::nullopt, "t", ""};
  BenchOptions opt;
  opt.k_values = {8};
  opt.top_r = 40;
  opt.repeats = 5;
  opt.seed = 31;
  opt.d_out = 256;
  const auto reports = run_benchmark(train, test, {Algorithm::kRandomCodes}, opt);
  double mean = 0.0;
  for (const auto& r : reports) mean += r.accuracy;
  mean /= static_cast<double>(reports.size());
  const double chance = 40.0 / 399.0;
  CHECK(mean > 0.3 * chance);
  CHECK(mean < 3.0 * chance);
}

TEST_CASE("algorithm names round-trip through the parser") {
  for (Algorithm a : {Algorithm::kSup, Algorithm::kUnsup, Algorithm::kLsh, Algorithm::kFjl,
                      Algorithm::kFly, Algorithm::kRandomCodes}) {
    Algorithm parsed;
    std::string lower = algorithm_name(a);
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    REQUIRE(parse_algorithm(lower, parsed));
    CHECK(parsed == a);
  }
  Algorithm unused;
  CHECK_FALSE(parse_algorithm("nope", unused));
}
