// Times the parallel kernels against their serial reference implementations
// on synthetic data and prints the speedup per kernel.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <functional>

#include "CLI11.hpp"

#include "wtahash/baselines.hpp"
#include "wtahash/eval.hpp"
#include "wtahash/reference.hpp"
#include "wtahash/rng.hpp"
#include "wtahash/trainer.hpp"
#include "wtahash/wta.hpp"

namespace {

using namespace wtahash;

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s < best) best = s;
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-18s serial %9.4fs   parallel %9.4fs   speedup %5.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel timing: parallel implementations vs serial references"};
  std::size_t n = 2000;
  std::uint32_t d = 128, d_out = 512, k = 8, c = 12, r = 50;
  std::uint64_t seed = 1;
  int reps = 3;
  app.add_option("--n", n, "samples")->capture_default_str();
  app.add_option("--d", d, "input dimension")->capture_default_str();
  app.add_option("--dout", d_out, "code dimension")->capture_default_str();
  app.add_option("--k", k, "ones per code")->capture_default_str();
  app.add_option("--c", c, "ones per row")->capture_default_str();
  app.add_option("--r", r, "neighbors per query")->capture_default_str();
  app.add_option("--seed", seed, "seed")->capture_default_str();
  app.add_option("--reps", reps, "repetitions, best-of")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("n=%zu d=%u dout=%u k=%u c=%u r=%u\n\n", n, d, d_out, k, c, r);

  Rng rng(seed);
  DenseMatrix x(d, n);
  for (auto& v : x.values()) v = static_cast<float>(rng.next_uniform(-1.0, 1.0));

  std::vector<std::uint32_t> yidx(n * k);
  std::vector<std::uint32_t> pool;
  for (std::size_t m = 0; m < n; ++m) sample_subset_into(rng, d_out, k, pool, yidx.data() + m * k);
  BinaryCodeMatrix y(d_out, n, k, BitAxis::kPerColumn, std::move(yidx));

  BaselineSpec fly{BaselineKind::kFly, d, d_out, k, c, 0.1, seed};
  const BinaryCodeMatrix w = make_fly(fly).w;

  report("score_vectors",
         time_best_of(reps, [&] { (void)reference::score_vectors(x, y); }),
         time_best_of(reps, [&] { (void)score_vectors(x, y); }));

  report("objective",
         time_best_of(reps, [&] { (void)reference::objective(w, x, y); }),
         time_best_of(reps, [&] { (void)objective_supervised(w, x, y); }));

  {
    // Serial hashing: per-column dense projection + full-sort competition.
    auto serial_hash = [&] {
      for (std::size_t m = 0; m < n; ++m)
        (void)reference::wta(reference::project_dense(w, x.col(m)), k);
    };
    report("hash_columns", time_best_of(reps, serial_hash),
           time_best_of(reps, [&] { (void)hash_columns(w, x, k); }));
  }

  report("ground_truth",
         time_best_of(reps, [&] { (void)reference::euclidean_neighbors(x, r); }),
         time_best_of(reps, [&] { (void)ground_truth(x, r); }));

  const BinaryCodeMatrix codes = hash_columns(w, x, k);
  report("hamming_top_r",
         time_best_of(reps, [&] { (void)reference::hamming_neighbors(codes, r); }),
         time_best_of(reps, [&] { (void)output_neighbors(codes, r); }));

  return 0;
}
