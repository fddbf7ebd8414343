#pragma once

// Dense kernels behind the randomized principal-subspace computation:
// panel-blocked matrix products, modified Gram-Schmidt with a
// reorthogonalization pass, and a cyclic Jacobi symmetric eigensolver.
// Every kernel accumulates in double with a fixed reduction order, so
// results are bitwise independent of the thread count.

#include <cstdint>
#include <vector>

#include "wtahash/matrix.hpp"

namespace wtahash::linalg {

// c = a * b, a is MxK float, b is KxN double.
ScoreMatrix matmul_ab(const DenseMatrix& a, const ScoreMatrix& b);
ScoreMatrix matmul_ab(const ScoreMatrix& a, const ScoreMatrix& b);

// c = a^T * b, a is KxM, b is KxN.
ScoreMatrix matmul_atb(const ScoreMatrix& a, const DenseMatrix& b);
ScoreMatrix matmul_atb(const ScoreMatrix& a, const ScoreMatrix& b);

// b * b^T for a wide SxN matrix.
ScoreMatrix gram_bt(const ScoreMatrix& b);

// In-place column orthonormalization (two-pass MGS). Columns whose residual
// norm falls below a relative threshold are zeroed.
void orthonormalize_columns(ScoreMatrix& q);

// Symmetric eigendecomposition by cyclic Jacobi sweeps. Returns eigenvalues
// in descending order; the columns of `vectors` are the matching
// orthonormal eigenvectors. `a` is destroyed.
void jacobi_eigh(ScoreMatrix& a, std::vector<double>& values, ScoreMatrix& vectors);

}  // namespace wtahash::linalg
