#pragma once

// Synthetic dataset generation and dense-vector file loaders. The synthetic
// family draws random fixed-weight binary codes, projects them onto their
// own top principal subspace to get dense inputs, and rescales so the mean
// pairwise squared distance matches between the two representations.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/matrix.hpp"

namespace wtahash {

struct ArtfcSpec {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint32_t d = 1000;      // dense dimension
  std::uint32_t d_out = 2000;  // code dimension
  std::uint32_t k = 4;         // ones per code
  std::uint64_t seed = 0;

  void validate() const;  // requires d < d_out, k < d_out, nonzero counts
};

struct Dataset {
  DenseMatrix x;
  std::optional<BinaryCodeMatrix> y;
  std::string name;
  std::string provenance;
};

struct ArtfcData {
  Dataset train;
  Dataset test;
};

ArtfcData generate_artfc(const ArtfcSpec& spec);

struct PcaResult {
  DenseMatrix coefficients;         // target_dim x N
  ScoreMatrix basis;                // D x target_dim, orthonormal columns
  std::vector<double> column_mean;  // length D
  std::vector<double> variances;    // captured variance per direction, descending
};

// Top-target_dim principal subspace via randomized range finding
// (oversampling 10, two power iterations). Coefficients are of the centered
// columns. Throws on zero-variance input or target_dim beyond the data rank.
PcaResult pca_decompose(const DenseMatrix& m, std::uint32_t target_dim, std::uint64_t seed);
DenseMatrix pca_project(const DenseMatrix& m, std::uint32_t target_dim, std::uint64_t seed);

// fvecs: repeated records of [int32 dim][dim x float32], little-endian.
DenseMatrix load_fvecs(const std::string& path);
void save_fvecs(const std::string& path, const DenseMatrix& x);

// Streaming record visitor; memory stays bounded by one record. Returns the
// record count. The callback receives each validated record in file order.
std::size_t stream_fvecs(const std::string& path,
                         const std::function<void(std::span<const float>)>& on_record);

// Record count implied by the file size once the first record fixes the
// dimension; validates divisibility.
std::size_t fvecs_record_count(const std::string& path);

// One sample per line, real fields, rectangular. Samples become columns.
DenseMatrix load_csv(const std::string& path, char delimiter = ',');

// Per-sample mean removal, the optional preprocessing toggle.
void center_columns(DenseMatrix& x);

// Mean squared distance over all ordered pairs of columns, via the
// variance identity (exact, O(rows * cols)).
double mean_pairwise_sqdist(const DenseMatrix& x);
double mean_pairwise_sqdist(const BinaryCodeMatrix& codes);

}  // namespace wtahash
