#pragma once

// Random-projection baselines: LSH (dense Gaussian), FJL (sparse signed),
// FLY (random sparse binary rows + winner-take-all). Construction is
// single-threaded and fully determined by the seed.

#include <cstdint>

#include "wtahash/matrix.hpp"
#include "wtahash/model.hpp"

namespace wtahash {

enum class BaselineKind { kLsh, kFjl, kFly };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::kLsh;
  std::uint32_t d = 0;        // input dimension
  std::uint32_t out_dim = 0;  // hash length for lsh/fjl, code dimension for fly
  std::uint32_t k = 0;        // fly only: ones per output code
  std::uint32_t c = 0;        // fly only: ones per row, 0 means floor(0.1 * d)
  double fjl_density = 0.1;   // fjl only: probability of a nonzero entry
  std::uint64_t seed = 0;

  void validate() const;
};

// out_dim x d, independent standard Gaussian entries.
DenseMatrix make_lsh(const BaselineSpec& spec);

// out_dim x d, entries 0 with probability 1-q and +-sqrt(1/q) with
// probability q/2 each, so every entry has unit variance. q = fjl_density;
// q = 1 degenerates to a dense Rademacher projection.
DenseMatrix make_fjl(const BaselineSpec& spec);

// Random fixed-weight rows; interchangeable with trained models.
TrainedModel make_fly(const BaselineSpec& spec);

// p * x for all columns of x, double accumulation. Parallel over columns.
DenseMatrix apply_projection(const DenseMatrix& p, const DenseMatrix& x);

}  // namespace wtahash
