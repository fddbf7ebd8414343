#include "wtahash/baselines.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "wtahash/rng.hpp"

namespace wtahash {

namespace {
constexpr std::uint64_t kStreamLsh = 2;
constexpr std::uint64_t kStreamFjl = 3;
constexpr std::uint64_t kStreamFly = 4;
}  // namespace

void BaselineSpec::validate() const {
  if (d == 0 || out_dim == 0)
    throw std::invalid_argument("BaselineSpec: dimensions must be positive");
  if (kind == BaselineKind::kFly) {
    if (k == 0 || k >= out_dim)
      throw std::invalid_argument("BaselineSpec: fly requires 1 <= k < out_dim");
    if (c > d) throw std::invalid_argument("BaselineSpec: fly requires c <= d");
  }
  if (kind == BaselineKind::kFjl && (fjl_density <= 0.0 || fjl_density > 1.0))
    throw std::invalid_argument("BaselineSpec: fjl density must be in (0, 1]");
}

DenseMatrix make_lsh(const BaselineSpec& spec) {
  if (spec.kind != BaselineKind::kLsh) throw std::invalid_argument("make_lsh: wrong kind");
  spec.validate();
  Rng rng(derive_seed(spec.seed, kStreamLsh));
  DenseMatrix p(spec.out_dim, spec.d);
  auto values = p.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = static_cast<float>(rng.next_gaussian());
  return p;
}

DenseMatrix make_fjl(const BaselineSpec& spec) {
  if (spec.kind != BaselineKind::kFjl) throw std::invalid_argument("make_fjl: wrong kind");
  spec.validate();
  Rng rng(derive_seed(spec.seed, kStreamFjl));
  const double q = spec.fjl_density;
  const float scale = static_cast<float>(std::sqrt(1.0 / q));
  DenseMatrix p(spec.out_dim, spec.d);
  auto values = p.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = rng.next_unit();
    values[i] = u < q ? (u < q * 0.5 ? scale : -scale) : 0.0f;
  }
  return p;
}

TrainedModel make_fly(const BaselineSpec& spec) {
  if (spec.kind != BaselineKind::kFly) throw std::invalid_argument("make_fly: wrong kind");
  spec.validate();
  ModelConfig cfg;
  cfg.d = spec.d;
  cfg.d_out = spec.out_dim;
  cfg.k = spec.k;
  cfg.c = spec.c;
  cfg.seed = spec.seed;
  cfg = cfg.resolved();

  Rng rng(derive_seed(spec.seed, kStreamFly));
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(cfg.d_out) * cfg.c);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < cfg.d_out; ++i)
    sample_subset_into(rng, cfg.d, cfg.c, pool, rows.data() + i * cfg.c);

  TrainedModel model;
  model.config = cfg;
  model.w = BinaryCodeMatrix(cfg.d_out, cfg.d, cfg.c, BitAxis::kPerRow, std::move(rows));
  model.objective = 0.0;
  model.iterations = 0;
  model.seed = cfg.seed;
  return model;
}

DenseMatrix apply_projection(const DenseMatrix& p, const DenseMatrix& x) {
  if (p.cols() != x.rows()) throw std::invalid_argument("apply_projection: dimension mismatch");
  DenseMatrix out(p.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(x.cols()); ++m) {
    const auto xm = x.col(static_cast<std::size_t>(m));
    auto om = out.col(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < p.rows(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j)
        acc += static_cast<double>(p(i, j)) * static_cast<double>(xm[j]);
      om[i] = static_cast<float>(acc);
    }
  }
  return out;
}

}  // namespace wtahash
