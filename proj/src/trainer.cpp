#include "wtahash/trainer.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "wtahash/parallel.hpp"
#include "wtahash/rng.hpp"
#include "wtahash/wta.hpp"

namespace wtahash {

namespace {

constexpr std::uint64_t kStreamUnsupInit = 1;

// Sum of every column, double accumulation on a fixed chunk grid so the
// result is independent of the worker count.
std::vector<double> global_column_sum(const DenseMatrix& x) {
  const std::size_t d = x.rows();
  const std::size_t n = x.cols();
  const std::size_t chunk = detail::kReduceChunk;
  const std::size_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  ScoreMatrix partials(d, nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
    auto part = partials.col(static_cast<std::size_t>(ci));
    const std::size_t lo = static_cast<std::size_t>(ci) * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    for (std::size_t m = lo; m < hi; ++m) {
      const auto xm = x.col(m);
      for (std::size_t r = 0; r < d; ++r) part[r] += static_cast<double>(xm[r]);
    }
  }
  std::vector<double> total(d, 0.0);
  for (std::size_t ci = 0; ci < nchunks; ++ci) {
    const auto part = partials.col(ci);
    for (std::size_t r = 0; r < d; ++r) total[r] += part[r];
  }
  return total;
}

// Sample lists per output row: CSR over the transposed code matrix.
struct RowLists {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> samples;
};

RowLists invert_codes(const BinaryCodeMatrix& y) {
  const std::size_t d_out = y.rows();
  const std::size_t n = y.cols();
  RowLists lists;
  lists.offsets.assign(d_out + 1, 0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::uint32_t i : y.slot_indices(m)) ++lists.offsets[i + 1];
  for (std::size_t i = 0; i < d_out; ++i) lists.offsets[i + 1] += lists.offsets[i];
  lists.samples.resize(lists.offsets[d_out]);
  std::vector<std::size_t> cursor(lists.offsets.begin(), lists.offsets.end() - 1);
  for (std::size_t m = 0; m < n; ++m)
    for (std::uint32_t i : y.slot_indices(m))
      lists.samples[cursor[i]++] = static_cast<std::uint32_t>(m);
  return lists;
}

void check_pair(const DenseMatrix& x, const BinaryCodeMatrix& y, const char* where) {
  if (y.axis() != BitAxis::kPerColumn)
    throw std::invalid_argument(std::string(where) + ": codes must be per-column fixed weight");
  if (x.cols() != y.cols())
    throw std::invalid_argument(std::string(where) + ": sample count mismatch");
}

}  // namespace

ScoreMatrix score_vectors(const DenseMatrix& x, const BinaryCodeMatrix& y) {
  check_pair(x, y, "score_vectors");
  const std::size_t d = x.rows();
  const std::size_t d_out = y.rows();
  const double shift = static_cast<double>(y.weight()) / static_cast<double>(d_out);

  const std::vector<double> total = global_column_sum(x);
  const RowLists lists = invert_codes(y);

  ScoreMatrix scores(d, d_out);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(d_out); ++i) {
    auto out = scores.col(static_cast<std::size_t>(i));
    for (std::size_t r = 0; r < d; ++r) out[r] = 0.0;
    const std::size_t lo = lists.offsets[static_cast<std::size_t>(i)];
    const std::size_t hi = lists.offsets[static_cast<std::size_t>(i) + 1];
    for (std::size_t p = lo; p < hi; ++p) {
      const auto xm = x.col(lists.samples[p]);
      for (std::size_t r = 0; r < d; ++r) out[r] += static_cast<double>(xm[r]);
    }
    for (std::size_t r = 0; r < d; ++r) out[r] -= shift * total[r];
  }
  return scores;
}

TrainedModel train_supervised(const DenseMatrix& x, const BinaryCodeMatrix& y,
                              const ModelConfig& config) {
  const ModelConfig cfg = config.resolved();
  if (x.rows() != cfg.d || y.rows() != cfg.d_out)
    throw std::invalid_argument("train_supervised: data does not match config dimensions");
  if (y.weight() != cfg.k)
    throw std::invalid_argument("train_supervised: code weight does not match config k");
  check_pair(x, y, "train_supervised");

  const ScoreMatrix scores = score_vectors(x, y);
  const std::size_t d_out = cfg.d_out;

  // Row subproblems are independent: keep the c largest scores per row.
  std::vector<std::uint32_t> rows(d_out * cfg.c);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(d_out); ++i) {
    const auto col = scores.col(static_cast<std::size_t>(i));
    detail::top_k_select(col.data(), col.size(), cfg.c,
                         rows.data() + static_cast<std::size_t>(i) * cfg.c);
  }

  TrainedModel model;
  model.config = cfg;
  model.w = BinaryCodeMatrix(d_out, cfg.d, cfg.c, BitAxis::kPerRow, std::move(rows));
  // The objective equals d_out times the sum of selected scores.
  double selected = 0.0;
  for (std::size_t i = 0; i < d_out; ++i) {
    const auto col = scores.col(i);
    for (std::uint32_t j : model.w.slot_indices(i)) selected += col[j];
  }
  model.objective = static_cast<double>(d_out) * selected;
  model.iterations = 1;
  model.seed = cfg.seed;
  return model;
}

double objective_supervised(const BinaryCodeMatrix& w, const DenseMatrix& x,
                            const BinaryCodeMatrix& y) {
  if (w.axis() != BitAxis::kPerRow)
    throw std::invalid_argument("objective: projection matrix must be per-row fixed weight");
  if (w.cols() != x.rows() || w.rows() != y.rows())
    throw std::invalid_argument("objective: dimension mismatch");
  check_pair(x, y, "objective");

  const std::size_t d = x.rows();
  const double d_out = static_cast<double>(w.rows());
  const double k = static_cast<double>(y.weight());

  // Ones per input coordinate across all rows; turns the all-rows response
  // sum into a single length-d dot product per sample.
  std::vector<double> ones_per_coord(d, 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::uint32_t j : w.slot_indices(i)) ones_per_coord[j] += 1.0;

  return detail::chunked_sum(x.cols(), [&](std::size_t lo, std::size_t hi) {
    double part = 0.0;
    for (std::size_t m = lo; m < hi; ++m) {
      const auto xm = x.col(m);
      double active = 0.0;
      for (std::uint32_t i : y.slot_indices(m)) {
        double dot = 0.0;
        for (std::uint32_t j : w.slot_indices(i)) dot += static_cast<double>(xm[j]);
        active += dot;
      }
      double all = 0.0;
      for (std::size_t r = 0; r < d; ++r) all += ones_per_coord[r] * static_cast<double>(xm[r]);
      part += d_out * active - k * all;
    }
    return part;
  });
}

double objective_unsupervised(const BinaryCodeMatrix& w, const BinaryCodeMatrix& y,
                              const DenseMatrix& x) {
  return objective_supervised(w, x, y);
}

UnsupervisedResult train_unsupervised(const DenseMatrix& x, const ModelConfig& config,
                                      const TrainOptions& options) {
  const ModelConfig cfg = config.resolved();
  if (x.rows() != cfg.d)
    throw std::invalid_argument("train_unsupervised: data does not match config dimensions");
  if (x.cols() == 0) throw std::invalid_argument("train_unsupervised: empty input");
  if (options.max_iterations == 0)
    throw std::invalid_argument("train_unsupervised: max_iterations must be positive");
  if (options.epsilon < 0.0)
    throw std::invalid_argument("train_unsupervised: epsilon must be non-negative");

  // Uniform random feasible rows, drawn sequentially from the derived seed.
  Rng rng(derive_seed(cfg.seed, kStreamUnsupInit));
  std::vector<std::uint32_t> init(static_cast<std::size_t>(cfg.d_out) * cfg.c);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < cfg.d_out; ++i)
    sample_subset_into(rng, cfg.d, cfg.c, pool, init.data() + i * cfg.c);

  UnsupervisedResult result;
  result.model.config = cfg;
  result.model.seed = cfg.seed;
  result.model.w = BinaryCodeMatrix(cfg.d_out, cfg.d, cfg.c, BitAxis::kPerRow, std::move(init));

  BinaryCodeMatrix prev_codes;
  HashStats stats;
  for (std::uint32_t t = 1; t <= options.max_iterations; ++t) {
    BinaryCodeMatrix codes = hash_columns(result.model.w, x, cfg.k, &stats);

    double objective = 0.0;
    for (std::size_t m = 0; m < x.cols(); ++m)
      objective += static_cast<double>(cfg.d_out) * stats.selected_sum[m] -
                   static_cast<double>(cfg.k) * stats.total_sum[m];

    const double previous = result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
    result.objective_trace.push_back(objective);
    result.model.objective = objective;
    result.model.iterations = t;
    const bool have_prev = t > 1;

    if (have_prev && options.stop == StopRule::kCodeFixedPoint && codes == prev_codes) {
      result.codes = std::move(codes);
      result.stop_reason = StopReason::kCodeFixedPoint;
      return result;
    }
    if (have_prev && options.stop == StopRule::kObjectiveEpsilon &&
        objective - previous <= options.epsilon) {
      result.codes = std::move(codes);
      result.stop_reason = StopReason::kObjectiveConverged;
      return result;
    }
    if (t == options.max_iterations) {
      result.codes = std::move(codes);
      result.stop_reason = StopReason::kMaxIterations;
      return result;
    }

    const ScoreMatrix scores = score_vectors(x, codes);
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(cfg.d_out) * cfg.c);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cfg.d_out); ++i) {
      const auto col = scores.col(static_cast<std::size_t>(i));
      detail::top_k_select(col.data(), col.size(), cfg.c,
                           rows.data() + static_cast<std::size_t>(i) * cfg.c);
    }
    result.model.w = BinaryCodeMatrix(cfg.d_out, cfg.d, cfg.c, BitAxis::kPerRow, std::move(rows));
    prev_codes = std::move(codes);
  }
  return result;  // unreachable
}

std::size_t count_zero_columns(const DenseMatrix& x) {
  std::int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(x.cols()); ++m) {
    const auto col = x.col(static_cast<std::size_t>(m));
    bool zero = true;
    for (float v : col)
      if (v != 0.0f) {
        zero = false;
        break;
      }
    count += zero ? 1 : 0;
  }
  return static_cast<std::size_t>(count);
}

}  // namespace wtahash
