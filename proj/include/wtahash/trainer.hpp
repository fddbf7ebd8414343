#pragma once

// Training of the projection matrix. The supervised trainer is closed form:
// each output row independently keeps the c largest entries of its score
// vector. The unsupervised trainer alternates between hashing the inputs
// with the current matrix and re-running the supervised step on the codes
// it produced; the shared objective is non-decreasing along the way.

#include <cstdint>
#include <vector>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/matrix.hpp"
#include "wtahash/model.hpp"

namespace wtahash {

enum class StopRule { kCodeFixedPoint, kObjectiveEpsilon };

struct TrainOptions {
  std::uint32_t max_iterations = 100;
  StopRule stop = StopRule::kCodeFixedPoint;
  double epsilon = 0.0;  // objective-increase threshold for kObjectiveEpsilon
};

enum class StopReason { kCodeFixedPoint, kObjectiveConverged, kMaxIterations };

// Score matrix, d x d_out. Column i is
//   sum_m x(:,m) * (y(i,m) - k/d_out)
// computed as the per-row sparse sum minus (k/d_out) times the global column
// sum, which is accumulated once. Rows are processed in parallel with a
// fixed per-row summation order.
ScoreMatrix score_vectors(const DenseMatrix& x, const BinaryCodeMatrix& y);

// Closed-form supervised fit. Reported objective is the exact supervised
// objective of the returned matrix.
TrainedModel train_supervised(const DenseMatrix& x, const BinaryCodeMatrix& y,
                              const ModelConfig& config);

// Signed margin mass between active and inactive output units, decomposed as
//   sum_m [ d_out * (selected row responses) - k * (all row responses) ].
double objective_supervised(const BinaryCodeMatrix& w, const DenseMatrix& x,
                            const BinaryCodeMatrix& y);

// Same algebraic form with the codes treated as a variable.
double objective_unsupervised(const BinaryCodeMatrix& w, const BinaryCodeMatrix& y,
                              const DenseMatrix& x);

struct UnsupervisedResult {
  TrainedModel model;
  BinaryCodeMatrix codes;               // codes at termination
  std::vector<double> objective_trace;  // one value per iteration, non-decreasing
  StopReason stop_reason = StopReason::kMaxIterations;
};

UnsupervisedResult train_unsupervised(const DenseMatrix& x, const ModelConfig& config,
                                      const TrainOptions& options = {});

// Columns whose entries are all exactly zero; they are legal inputs and
// contribute nothing to the scores, but callers may want to warn.
std::size_t count_zero_columns(const DenseMatrix& x);

}  // namespace wtahash
