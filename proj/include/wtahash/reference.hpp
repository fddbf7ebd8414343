#pragma once

// Serial reference implementations: direct, unoptimized evaluations of the
// same quantities the parallel kernels compute. Tests check the kernels
// against these, and the benchmark tool reports the speedup over them.
// Nothing here shares code with the fast paths.

#include <cstdint>
#include <span>
#include <vector>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/matrix.hpp"

namespace wtahash::reference {

// Full stable sort by (value desc, index asc), take the first k.
std::vector<std::uint8_t> wta(std::span<const double> x, std::uint32_t k);

// Densifies w and runs a plain matrix-vector product.
std::vector<double> project_dense(const BinaryCodeMatrix& w, std::span<const float> x);

// Direct summation of the score definition, one term at a time.
ScoreMatrix score_vectors(const DenseMatrix& x, const BinaryCodeMatrix& y);

// Naive triple loop over (sample, active unit, inactive unit).
double objective(const BinaryCodeMatrix& w, const DenseMatrix& x, const BinaryCodeMatrix& y);

// Exhaustive per-row search: for every output row, enumerate all
// weight-c subsets of the input coordinates and keep the best-scoring one.
// Feasible only for small dimensions; used as the optimality oracle.
BinaryCodeMatrix best_rows_exhaustive(const DenseMatrix& x, const BinaryCodeMatrix& y,
                                      std::uint32_t c);

// Full distance-matrix neighbor search, stable sort per query.
std::vector<std::int32_t> euclidean_neighbors(const DenseMatrix& x, std::uint32_t r);
std::vector<std::int32_t> hamming_neighbors(const BinaryCodeMatrix& codes, std::uint32_t r);

}  // namespace wtahash::reference
