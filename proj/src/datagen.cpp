#include "wtahash/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "wtahash/io.hpp"
#include "wtahash/linalg.hpp"
#include "wtahash/parallel.hpp"
#include "wtahash/rng.hpp"

namespace wtahash {

namespace {
constexpr std::uint64_t kStreamArtfcCodes = 5;
constexpr std::uint64_t kStreamPcaOmega = 6;
constexpr std::uint64_t kStreamArtfcPca = 7;

std::vector<double> column_mean(const DenseMatrix& m) {
  const std::size_t d = m.rows(), n = m.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = m.col(j);
    for (std::size_t r = 0; r < d; ++r) mean[r] += static_cast<double>(col[r]);
  }
  for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}
}  // namespace

void ArtfcSpec::validate() const {
  if (n_train == 0 || n_test == 0)
    throw std::invalid_argument("ArtfcSpec: sample counts must be positive");
  if (d == 0 || d >= d_out) throw std::invalid_argument("ArtfcSpec: requires 1 <= d < d_out");
  if (k == 0 || k >= d_out) throw std::invalid_argument("ArtfcSpec: requires 1 <= k < d_out");
}

PcaResult pca_decompose(const DenseMatrix& m, std::uint32_t target_dim, std::uint64_t seed) {
  const std::size_t d = m.rows(), n = m.cols();
  if (target_dim == 0 || target_dim > std::min(d, n))
    throw std::invalid_argument("pca_decompose: target_dim must be in [1, min(rows, cols)]");

  PcaResult result;
  result.column_mean = column_mean(m);
  DenseMatrix centered(d, n);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(n); ++j) {
    const auto src = m.col(static_cast<std::size_t>(j));
    auto dst = centered.col(static_cast<std::size_t>(j));
    for (std::size_t r = 0; r < d; ++r)
      dst[r] = static_cast<float>(static_cast<double>(src[r]) - result.column_mean[r]);
  }

  double total_var = detail::chunked_sum(centered.values().size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    const auto v = centered.values();
    for (std::size_t i = lo; i < hi; ++i) acc += static_cast<double>(v[i]) * static_cast<double>(v[i]);
    return acc;
  });
  if (total_var <= 0.0)
    throw std::invalid_argument(
        "pca_decompose: degenerate input, all columns are identical (zero variance)");

  // Randomized range finder: oversampling 10, two power iterations.
  const std::size_t sketch = std::min<std::size_t>(target_dim + 10, std::min(d, n));
  Rng rng(derive_seed(seed, kStreamPcaOmega));
  ScoreMatrix omega(n, sketch);
  for (auto& v : omega.values()) v = rng.next_gaussian();

  ScoreMatrix q = linalg::matmul_ab(centered, omega);
  linalg::orthonormalize_columns(q);
  // Power iterations: q <- orth(A (A^T q)).
  for (int iter = 0; iter < 2; ++iter) {
    ScoreMatrix at_q(n, sketch);
    {
      ScoreMatrix tmp = linalg::matmul_atb(q, centered);  // sketch x n = q^T A
      for (std::size_t i = 0; i < sketch; ++i)
        for (std::size_t j = 0; j < n; ++j) at_q(j, i) = tmp(i, j);
    }
    q = linalg::matmul_ab(centered, at_q);
    linalg::orthonormalize_columns(q);
  }

  ScoreMatrix b = linalg::matmul_atb(q, centered);  // sketch x n
  ScoreMatrix gram = linalg::gram_bt(b);            // sketch x sketch
  std::vector<double> eigenvalues;
  ScoreMatrix eigenvectors;
  linalg::jacobi_eigh(gram, eigenvalues, eigenvectors);

  const double rank_floor = 1e-10 * std::max(eigenvalues.front(), 0.0);
  if (eigenvalues[target_dim - 1] <= rank_floor)
    throw std::invalid_argument(
        "pca_decompose: target_dim exceeds the effective rank of the input");

  ScoreMatrix top(sketch, target_dim, 0.0);
  for (std::size_t i = 0; i < sketch; ++i)
    for (std::size_t j = 0; j < target_dim; ++j) top(i, j) = eigenvectors(i, j);

  result.basis = linalg::matmul_ab(q, top);          // d x target_dim
  ScoreMatrix coeffs = linalg::matmul_atb(top, b);   // target_dim x n
  result.coefficients = DenseMatrix(target_dim, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto src = coeffs.col(j);
    auto dst = result.coefficients.col(j);
    for (std::size_t r = 0; r < target_dim; ++r) dst[r] = static_cast<float>(src[r]);
  }
  result.variances.assign(eigenvalues.begin(), eigenvalues.begin() + target_dim);
  return result;
}

DenseMatrix pca_project(const DenseMatrix& m, std::uint32_t target_dim, std::uint64_t seed) {
  return pca_decompose(m, target_dim, seed).coefficients;
}

double mean_pairwise_sqdist(const DenseMatrix& x) {
  const std::size_t n = x.cols();
  if (n < 2) return 0.0;
  const std::vector<double> mean = column_mean(x);
  const double scatter = detail::chunked_sum(n, [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const auto col = x.col(j);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        const double dv = static_cast<double>(col[r]) - mean[r];
        acc += dv * dv;
      }
    }
    return acc;
  });
  return 2.0 * scatter / static_cast<double>(n - 1);
}

double mean_pairwise_sqdist(const BinaryCodeMatrix& codes) {
  const std::size_t n = codes.cols();
  if (n < 2) return 0.0;
  std::vector<double> count(codes.rows(), 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::uint32_t i : codes.slot_indices(m)) count[i] += 1.0;
  double mean_norm2 = 0.0;
  for (double cnt : count) mean_norm2 += (cnt / n) * (cnt / n);
  const double scatter = static_cast<double>(n) * codes.weight() - n * mean_norm2;
  return 2.0 * scatter / static_cast<double>(n - 1);
}

ArtfcData generate_artfc(const ArtfcSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_train + spec.n_test;

  Rng rng(derive_seed(spec.seed, kStreamArtfcCodes));
  std::vector<std::uint32_t> indices(n * spec.k);
  std::vector<std::uint32_t> pool;
  for (std::size_t m = 0; m < n; ++m)
    sample_subset_into(rng, spec.d_out, spec.k, pool, indices.data() + m * spec.k);
  BinaryCodeMatrix codes(spec.d_out, n, spec.k, BitAxis::kPerColumn, std::move(indices));

  DenseMatrix dense_codes(spec.d_out, n, 0.0f);
  for (std::size_t m = 0; m < n; ++m)
    for (std::uint32_t i : codes.slot_indices(m)) dense_codes(i, m) = 1.0f;

  DenseMatrix x = pca_project(dense_codes, spec.d, derive_seed(spec.seed, kStreamArtfcPca));

  // Distance matching: one global rescale so the mean pairwise squared
  // distance agrees between the two representations.
  const double target = mean_pairwise_sqdist(codes);
  const double actual = mean_pairwise_sqdist(x);
  const float scale = static_cast<float>(std::sqrt(target / actual));
  for (auto& v : x.values()) v *= scale;

  const std::string base = "artfc-d" + std::to_string(spec.d) + "-dout" +
                           std::to_string(spec.d_out) + "-k" + std::to_string(spec.k) + "-seed" +
                           std::to_string(spec.seed);
  const std::string prov =
      "generated: random fixed-weight codes, principal-subspace projection, distance-matched";

  auto take = [&](std::size_t lo, std::size_t count) {
    Dataset ds;
    ds.x = DenseMatrix(spec.d, count);
    for (std::size_t j = 0; j < count; ++j) {
      const auto src = x.col(lo + j);
      auto dst = ds.x.col(j);
      std::copy(src.begin(), src.end(), dst.begin());
    }
    std::vector<std::uint32_t> idx(count * spec.k);
    for (std::size_t j = 0; j < count; ++j) {
      const auto src = codes.slot_indices(lo + j);
      std::copy(src.begin(), src.end(), idx.begin() + j * spec.k);
    }
    ds.y = BinaryCodeMatrix(spec.d_out, count, spec.k, BitAxis::kPerColumn, std::move(idx));
    ds.provenance = prov;
    return ds;
  };

  ArtfcData data;
  data.train = take(0, spec.n_train);
  data.train.name = base + "-train";
  data.test = take(spec.n_train, spec.n_test);
  data.test.name = base + "-test";
  return data;
}

std::size_t stream_fvecs(const std::string& path,
                         const std::function<void(std::span<const float>)>& on_record) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::vector<float> record;
  std::int32_t dim = -1;
  std::uint64_t offset = 0;
  std::size_t count = 0;
  for (;;) {
    std::int32_t record_dim = 0;
    in.read(reinterpret_cast<char*>(&record_dim), sizeof(record_dim));
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != sizeof(record_dim))
      throw FormatError(path, offset, "truncated record header");
    if (record_dim <= 0)
      throw FormatError(path, offset, "record dimension must be positive, got " +
                                          std::to_string(record_dim));
    if (dim < 0) dim = record_dim;
    if (record_dim != dim)
      throw FormatError(path, offset,
                        "inconsistent record dimension: expected " + std::to_string(dim) +
                            ", got " + std::to_string(record_dim));
    record.resize(static_cast<std::size_t>(dim));
    in.read(reinterpret_cast<char*>(record.data()),
            static_cast<std::streamsize>(sizeof(float) * dim));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(float) * dim))
      throw FormatError(path, offset + 4, "truncated record payload");
    for (std::int32_t i = 0; i < dim; ++i)
      if (!std::isfinite(record[static_cast<std::size_t>(i)]))
        throw FormatError(path, offset + 4 + 4 * static_cast<std::uint64_t>(i),
                          "non-finite value");
    on_record(record);
    offset += 4 + 4 * static_cast<std::uint64_t>(dim);
    ++count;
  }
  return count;
}

std::size_t fvecs_record_count(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open file");
  in.seekg(0, std::ios::end);
  const std::uint64_t size = static_cast<std::uint64_t>(in.tellg());
  if (size == 0) return 0;
  in.seekg(0, std::ios::beg);
  std::int32_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (in.gcount() != sizeof(dim)) throw FormatError(path, 0, "truncated record header");
  if (dim <= 0)
    throw FormatError(path, 0, "record dimension must be positive, got " + std::to_string(dim));
  const std::uint64_t record_bytes = 4 + 4 * static_cast<std::uint64_t>(dim);
  if (size % record_bytes != 0)
    throw FormatError(path, size - size % record_bytes, "truncated record");
  return size / record_bytes;
}

DenseMatrix load_fvecs(const std::string& path) {
  std::vector<float> values;
  std::size_t dim = 0;
  const std::size_t cols = stream_fvecs(path, [&](std::span<const float> record) {
    dim = record.size();
    values.insert(values.end(), record.begin(), record.end());
  });
  if (cols == 0) return DenseMatrix();
  return DenseMatrix::from_values(dim, cols, std::move(values));
}

void save_fvecs(const std::string& path, const DenseMatrix& x) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path, 0, "cannot open file for writing");
  const std::int32_t dim = static_cast<std::int32_t>(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    const auto col = x.col(j);
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(sizeof(float) * col.size()));
  }
  if (!out) throw FormatError(path, 0, "write failure");
}

DenseMatrix load_csv(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::vector<std::vector<float>> samples;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<float> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(delimiter, pos);
      if (end == std::string::npos) end = line.size();
      std::size_t lo = pos, hi = end;
      while (lo < hi && std::isspace(static_cast<unsigned char>(line[lo]))) ++lo;
      while (hi > lo && std::isspace(static_cast<unsigned char>(line[hi - 1]))) --hi;
      float value = 0.0f;
      const auto [ptr, ec] = std::from_chars(line.data() + lo, line.data() + hi, value);
      if (ec != std::errc() || ptr != line.data() + hi || lo == hi)
        throw FormatError(path, 0, "line " + std::to_string(line_no) + ": unparsable field '" +
                                       line.substr(pos, end - pos) + "'");
      if (!std::isfinite(value))
        throw FormatError(path, 0, "line " + std::to_string(line_no) + ": non-finite value");
      fields.push_back(value);
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw FormatError(path, 0, "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(width) + " fields, got " +
                                     std::to_string(fields.size()));
    samples.push_back(std::move(fields));
  }
  if (samples.empty()) return DenseMatrix();
  DenseMatrix x(width, samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j)
    for (std::size_t r = 0; r < width; ++r) x(r, j) = samples[j][r];
  return x;
}

void center_columns(DenseMatrix& x) {
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(x.cols()); ++j) {
    auto col = x.col(static_cast<std::size_t>(j));
    double mean = 0.0;
    for (float v : col) mean += static_cast<double>(v);
    mean /= static_cast<double>(col.size());
    for (float& v : col) v = static_cast<float>(static_cast<double>(v) - mean);
  }
}

}  // namespace wtahash
