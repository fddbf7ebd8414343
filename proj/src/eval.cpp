#include "wtahash/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "wtahash/baselines.hpp"
#include "wtahash/rng.hpp"
#include "wtahash/trainer.hpp"
#include "wtahash/wta.hpp"

namespace wtahash {

namespace {

struct Hit {
  double dist;
  std::int32_t index;
};
// Heap front is the worst kept neighbor: larger distance, then larger index.
inline bool keep_less(const Hit& a, const Hit& b) {
  return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
}

// Top-r nearest per query under dist(q, j); the query itself is excluded and
// boundary ties keep the lowest index. Queries run in parallel.
template <typename DistFn>
NeighborTable neighbor_search(std::size_t n, std::uint32_t r, DistFn&& dist) {
  if (r >= n) throw std::invalid_argument("neighbor search: r must be below the corpus size");
  NeighborTable table;
  table.n_queries = n;
  table.top_r = r;
  table.indices.resize(n * r);
#pragma omp parallel
  {
    std::vector<Hit> heap;
    heap.reserve(r);
#pragma omp for schedule(static)
    for (std::int64_t q = 0; q < static_cast<std::int64_t>(n); ++q) {
      heap.clear();
      const std::size_t query = static_cast<std::size_t>(q);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == query) continue;
        const double dj = dist(query, j);
        if (heap.size() < r) {
          heap.push_back({dj, static_cast<std::int32_t>(j)});
          if (heap.size() == r) std::make_heap(heap.begin(), heap.end(), keep_less);
          continue;
        }
        // Ascending j: a tie with the current worst never replaces it.
        if (dj < heap.front().dist) {
          std::pop_heap(heap.begin(), heap.end(), keep_less);
          heap.back() = {dj, static_cast<std::int32_t>(j)};
          std::push_heap(heap.begin(), heap.end(), keep_less);
        }
      }
      std::sort(heap.begin(), heap.end(), keep_less);
      std::int32_t* out = table.indices.data() + query * r;
      for (std::uint32_t i = 0; i < r; ++i) out[i] = heap[i].index;
    }
  }
  return table;
}

double steady_seconds(std::chrono::steady_clock::time_point a,
                      std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

NeighborTable ground_truth(const DenseMatrix& x, std::uint32_t r) {
  const std::size_t d = x.rows();
  return neighbor_search(x.cols(), r, [&](std::size_t a, std::size_t b) {
    const auto xa = x.col(a);
    const auto xb = x.col(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = static_cast<double>(xa[i]) - static_cast<double>(xb[i]);
      acc += diff * diff;
    }
    return acc;
  });
}

NeighborTable output_neighbors(const BinaryCodeMatrix& codes, std::uint32_t r) {
  if (codes.axis() != BitAxis::kPerColumn)
    throw std::invalid_argument("output_neighbors: codes must be per-column fixed weight");
  return neighbor_search(codes.cols(), r, [&](std::size_t a, std::size_t b) {
    return static_cast<double>(codes.hamming(a, b));
  });
}

NeighborTable output_neighbors(const DenseMatrix& outputs, std::uint32_t r) {
  return ground_truth(outputs, r);
}

double overlap_accuracy(const NeighborTable& gt, const NeighborTable& found) {
  if (gt.n_queries != found.n_queries || gt.top_r != found.top_r)
    throw std::invalid_argument("overlap_accuracy: table shape mismatch");
  const std::uint32_t r = gt.top_r;
  double total = 0.0;
  std::vector<std::int32_t> a(r), b(r);
  for (std::size_t q = 0; q < gt.n_queries; ++q) {
    const auto ra = gt.row(q);
    const auto rb = found.row(q);
    a.assign(ra.begin(), ra.end());
    b.assign(rb.begin(), rb.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0, shared = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j])
        ++i;
      else if (b[j] < a[i])
        ++j;
      else {
        ++shared;
        ++i;
        ++j;
      }
    }
    total += static_cast<double>(shared) / static_cast<double>(r);
  }
  return total / static_cast<double>(gt.n_queries);
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kSup: return "SUP";
    case Algorithm::kUnsup: return "UNSUP";
    case Algorithm::kLsh: return "LSH";
    case Algorithm::kFjl: return "FJL";
    case Algorithm::kFly: return "FLY";
    case Algorithm::kRandomCodes: return "RAND";
  }
  return "?";
}

bool parse_algorithm(const std::string& token, Algorithm& out) {
  std::string t;
  for (char ch : token) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (t == "sup") out = Algorithm::kSup;
  else if (t == "unsup") out = Algorithm::kUnsup;
  else if (t == "lsh") out = Algorithm::kLsh;
  else if (t == "fjl") out = Algorithm::kFjl;
  else if (t == "fly") out = Algorithm::kFly;
  else if (t == "rand") out = Algorithm::kRandomCodes;
  else return false;
  return true;
}

std::vector<EvalReport> run_benchmark(const Dataset& train, const Dataset& test,
                                      const std::vector<Algorithm>& algorithms,
                                      const BenchOptions& options) {
  if (algorithms.empty()) throw std::invalid_argument("run_benchmark: no algorithms");
  if (options.k_values.empty()) throw std::invalid_argument("run_benchmark: no hash lengths");
  if (options.repeats < 1 || options.repeats > 50)
    throw std::invalid_argument("run_benchmark: repeats must be in [1, 50]");
  if (train.x.rows() != test.x.rows())
    throw std::invalid_argument("run_benchmark: train/test dimension mismatch");
  if (options.top_r < 1 || options.top_r >= test.x.cols())
    throw std::invalid_argument("run_benchmark: top_r must be in [1, test samples)");

  const std::uint32_t d = static_cast<std::uint32_t>(train.x.rows());
  const bool needs_codes = [&] {
    for (Algorithm a : algorithms)
      if (a == Algorithm::kSup || a == Algorithm::kUnsup || a == Algorithm::kFly ||
          a == Algorithm::kRandomCodes)
        return true;
    return false;
  }();
  if (needs_codes && options.d_out == 0)
    throw std::invalid_argument("run_benchmark: d_out is required for code-producing algorithms");

  // Ground truth is the geometry of the raw test inputs; normalization only
  // changes what the algorithms see.
  const NeighborTable gt = ground_truth(test.x, options.top_r);

  DenseMatrix train_view = train.x;
  DenseMatrix test_view = test.x;
  if (options.normalize) {
    center_columns(train_view);
    center_columns(test_view);
  }

  const std::string dataset_name = !test.name.empty() ? test.name : train.name;
  std::vector<EvalReport> reports;
  using clock = std::chrono::steady_clock;

  for (std::uint32_t k : options.k_values) {
    for (Algorithm algo : algorithms) {
      if (algo == Algorithm::kSup) {
        if (!train.y)
          throw std::invalid_argument(
              "run_benchmark: supervised training requires output codes in the train split");
        if (train.y->weight() != k)
          throw std::invalid_argument(
              "run_benchmark: train codes have weight " + std::to_string(train.y->weight()) +
              " but hash length " + std::to_string(k) + " was requested");
      }
      for (std::uint32_t run = 0; run < options.repeats; ++run) {
        const std::uint64_t stream = (static_cast<std::uint64_t>(algo) + 1) << 40 |
                                     static_cast<std::uint64_t>(k) << 16 | run;
        const std::uint64_t run_seed = derive_seed(options.seed, stream);

        EvalReport report;
        report.dataset = dataset_name;
        report.algorithm = algorithm_name(algo);
        report.k = k;
        report.run = run;
        report.seed = run_seed;

        const auto t0 = clock::now();
        NeighborTable found;
        clock::time_point t1;
        switch (algo) {
          case Algorithm::kSup: {
            ModelConfig cfg{d, options.d_out, k, options.c, run_seed};
            TrainedModel model = train_supervised(train_view, *train.y, cfg);
            t1 = clock::now();
            found = output_neighbors(hash_columns(model.w, test_view, k), options.top_r);
            break;
          }
          case Algorithm::kUnsup: {
            ModelConfig cfg{d, options.d_out, k, options.c, run_seed};
            TrainOptions topt;
            topt.max_iterations = options.max_iterations;
            UnsupervisedResult res = train_unsupervised(train_view, cfg, topt);
            t1 = clock::now();
            found = output_neighbors(hash_columns(res.model.w, test_view, k), options.top_r);
            break;
          }
          case Algorithm::kLsh: {
            BaselineSpec spec{BaselineKind::kLsh, d, k, 0, 0, 0.1, run_seed};
            DenseMatrix p = make_lsh(spec);
            t1 = clock::now();
            found = output_neighbors(apply_projection(p, test_view), options.top_r);
            break;
          }
          case Algorithm::kFjl: {
            BaselineSpec spec{BaselineKind::kFjl, d, k, 0, 0, 0.1, run_seed};
            DenseMatrix p = make_fjl(spec);
            t1 = clock::now();
            found = output_neighbors(apply_projection(p, test_view), options.top_r);
            break;
          }
          case Algorithm::kFly: {
            BaselineSpec spec{BaselineKind::kFly, d, options.d_out, k, options.c, 0.1, run_seed};
            TrainedModel model = make_fly(spec);
            t1 = clock::now();
            found = output_neighbors(hash_columns(model.w, test_view, k), options.top_r);
            break;
          }
          case Algorithm::kRandomCodes: {
            // Data-independent control: every test item gets a uniform
            // random fixed-weight code; accuracy should sit at chance.
            Rng rng(run_seed);
            const std::size_t n = test_view.cols();
            std::vector<std::uint32_t> idx(n * k);
            std::vector<std::uint32_t> pool;
            for (std::size_t m = 0; m < n; ++m)
              sample_subset_into(rng, options.d_out, k, pool, idx.data() + m * k);
            t1 = clock::now();
            BinaryCodeMatrix codes(options.d_out, n, k, BitAxis::kPerColumn, std::move(idx));
            found = output_neighbors(codes, options.top_r);
            break;
          }
        }
        const auto t2 = clock::now();
        report.accuracy = overlap_accuracy(gt, found);
        const auto t3 = clock::now();
        report.train_seconds = steady_seconds(t0, t1);
        report.eval_seconds = steady_seconds(t1, t2) + steady_seconds(t2, t3);
        reports.push_back(std::move(report));
      }
    }
  }
  return reports;
}

void write_reports_csv(std::ostream& os, std::span<const EvalReport> reports,
                       bool include_timing) {
  os << "dataset,algorithm,k,run,accuracy,train_seconds,eval_seconds,seed\n";
  char buf[128];
  for (const EvalReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.9g", r.accuracy);
    os << r.dataset << ',' << r.algorithm << ',' << r.k << ',' << r.run << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", include_timing ? r.train_seconds : 0.0,
                  include_timing ? r.eval_seconds : 0.0);
    os << ',' << buf << ',' << r.seed << '\n';
  }
}

void print_table(std::ostream& os, std::span<const EvalReport> reports) {
  // Rows keyed by (dataset, k), one column per algorithm, mean +- sd.
  std::vector<std::string> algos;
  std::map<std::pair<std::string, std::uint32_t>, std::map<std::string, std::vector<double>>> cells;
  for (const EvalReport& r : reports) {
    if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
      algos.push_back(r.algorithm);
    cells[{r.dataset, r.k}][r.algorithm].push_back(r.accuracy);
  }
  char buf[64];
  os << "dataset                          k";
  for (const auto& a : algos) {
    std::snprintf(buf, sizeof(buf), " %16s", a.c_str());
    os << buf;
  }
  os << '\n';
  for (const auto& [key, row] : cells) {
    std::snprintf(buf, sizeof(buf), "%-32s %2u", key.first.c_str(), key.second);
    os << buf;
    for (const auto& a : algos) {
      auto it = row.find(a);
      if (it == row.end()) {
        std::snprintf(buf, sizeof(buf), " %16s", "-");
        os << buf;
        continue;
      }
      const auto& v = it->second;
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      if (v.size() > 1) {
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size() - 1);
        std::snprintf(buf, sizeof(buf), "  %.4f±%.4f", mean, std::sqrt(var));
      } else {
        std::snprintf(buf, sizeof(buf), "          %.4f", mean);
      }
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace wtahash
