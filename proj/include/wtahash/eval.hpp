#pragma once

// Similarity-search evaluation: exact nearest neighbors in the input space,
// neighbor retrieval in the output space, and the overlap accuracy between
// the two. Binary codes are ranked by Hamming distance (identical to the
// Euclidean ranking for fixed-weight codes); dense outputs by Euclidean.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/datagen.hpp"
#include "wtahash/matrix.hpp"

namespace wtahash {

struct NeighborTable {
  std::size_t n_queries = 0;
  std::uint32_t top_r = 0;
  std::vector<std::int32_t> indices;  // row-major, each row ascending by distance

  std::span<const std::int32_t> row(std::size_t q) const {
    return {indices.data() + q * top_r, top_r};
  }
};

// Exact Euclidean top-r for every column queried against all others. The
// query itself is excluded; ties at the selection boundary keep the lowest
// index. Queries run in parallel.
NeighborTable ground_truth(const DenseMatrix& x, std::uint32_t r);

NeighborTable output_neighbors(const BinaryCodeMatrix& codes, std::uint32_t r);
NeighborTable output_neighbors(const DenseMatrix& outputs, std::uint32_t r);

// Mean over queries of |shared neighbors| / top_r.
double overlap_accuracy(const NeighborTable& gt, const NeighborTable& found);

enum class Algorithm { kSup, kUnsup, kLsh, kFjl, kFly, kRandomCodes };

std::string algorithm_name(Algorithm a);
bool parse_algorithm(const std::string& token, Algorithm& out);

struct EvalReport {
  std::string dataset;
  std::string algorithm;
  std::uint32_t k = 0;
  std::uint32_t run = 0;
  double accuracy = 0.0;
  double train_seconds = 0.0;
  double eval_seconds = 0.0;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::vector<std::uint32_t> k_values;
  std::uint32_t top_r = 100;
  std::uint32_t repeats = 10;  // 1..50
  std::uint64_t seed = 0;
  std::uint32_t d_out = 0;          // code dimension for sup/unsup/fly
  std::uint32_t c = 0;              // 0 means floor(0.1 * d)
  std::uint32_t max_iterations = 100;
  bool normalize = false;           // per-sample mean centering before fitting
};

// Protocol: fit on the train split, transform the test split, compare
// output-space neighbors with the exact input-space neighbors of the raw
// test inputs. Per-run seeds are derived from (seed, algorithm, k, run), so
// adding algorithms or hash lengths never perturbs the others' randomness.
std::vector<EvalReport> run_benchmark(const Dataset& train, const Dataset& test,
                                      const std::vector<Algorithm>& algorithms,
                                      const BenchOptions& options);

// header: dataset,algorithm,k,run,accuracy,train_seconds,eval_seconds,seed
void write_reports_csv(std::ostream& os, std::span<const EvalReport> reports,
                       bool include_timing = true);

// Per-(dataset, k) rows, one column per algorithm, mean and spread over runs.
void print_table(std::ostream& os, std::span<const EvalReport> reports);

}  // namespace wtahash
