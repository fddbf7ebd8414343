#pragma once

// The winner-take-all competition and the sparse binary projection it acts
// on. wta keeps the positions of the top-k values as ones and zeroes the
// rest; ties at the selection boundary keep the lowest index, so every
// result is deterministic.

#include <cstdint>
#include <span>
#include <vector>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/matrix.hpp"

namespace wtahash {

// Positions of the k largest entries of x, ascending. Throws
// std::invalid_argument for k outside [1, x.size()] or non-finite input.
std::vector<std::uint32_t> wta_indices(std::span<const double> x, std::uint32_t k);

// Mask form: out[i] = 1 iff i is selected.
std::vector<std::uint8_t> wta(std::span<const double> x, std::uint32_t k);

// w * x for a per-row fixed-weight w: out[i] sums x over row i's index list
// (weight additions per row, no multiplies).
std::vector<double> project(const BinaryCodeMatrix& w, std::span<const float> x);

// wta(project(w, x), k).
std::vector<std::uint32_t> hash_indices(const BinaryCodeMatrix& w, std::span<const float> x,
                                        std::uint32_t k);

// Per-column statistics captured while hashing: the sum of the k selected
// projection values and the sum over all output rows.
struct HashStats {
  std::vector<double> selected_sum;
  std::vector<double> total_sum;
};

// Hash every column of x. Columns are independent and run in parallel; the
// result does not depend on the worker count.
BinaryCodeMatrix hash_columns(const BinaryCodeMatrix& w, const DenseMatrix& x, std::uint32_t k,
                              HashStats* stats = nullptr);

namespace detail {
// Unchecked top-k selection used by validated callers; `out` receives k
// indices in ascending order.
void top_k_select(const double* values, std::size_t n, std::uint32_t k, std::uint32_t* out);
void project_into(const BinaryCodeMatrix& w, std::span<const float> x, std::span<double> out);
}  // namespace detail

}  // namespace wtahash
