#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wtahash/matrix.hpp"
#include "wtahash/model.hpp"
#include "wtahash/rng.hpp"

namespace wtahash {

void require_finite(const DenseMatrix& m, const std::string& what) {
  const auto v = m.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::invalid_argument(what + ": non-finite value at row " +
                                  std::to_string(i % m.rows()) + ", col " +
                                  std::to_string(i / m.rows()));
    }
  }
}

void sample_subset_into(Rng& rng, std::uint32_t n, std::uint32_t k,
                        std::vector<std::uint32_t>& pool, std::uint32_t* out) {
  pool.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(rng.next_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::sort(pool.begin(), pool.begin() + k);
  for (std::uint32_t i = 0; i < k; ++i) out[i] = pool[i];
}

std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t n, std::uint32_t k) {
  if (k > n) throw std::invalid_argument("sample_subset: k > n");
  std::vector<std::uint32_t> pool;
  std::vector<std::uint32_t> out(k);
  sample_subset_into(rng, n, k, pool, out.data());
  return out;
}

ModelConfig ModelConfig::resolved() const {
  ModelConfig r = *this;
  if (r.c == 0) r.c = r.d / 10 > 0 ? r.d / 10 : 1;
  if (r.d == 0) throw std::invalid_argument("ModelConfig: d must be positive");
  if (r.k == 0 || r.k >= r.d_out)
    throw std::invalid_argument("ModelConfig: k must satisfy 1 <= k < d_out");
  if (r.c > r.d) throw std::invalid_argument("ModelConfig: c must satisfy 1 <= c <= d");
  return r;
}

}  // namespace wtahash
