#pragma once

// Model configuration and the trained projection matrix.

#include <cstdint>

#include "wtahash/binary_matrix.hpp"

namespace wtahash {

struct ModelConfig {
  std::uint32_t d = 0;      // input dimension
  std::uint32_t d_out = 0;  // output (code) dimension, typically > d
  std::uint32_t k = 0;      // ones per output code (hash length)
  std::uint32_t c = 0;      // ones per projection row; 0 means floor(0.1 * d)
  std::uint64_t seed = 0;

  // Applies the default c and validates 1 <= k < d_out, 1 <= c <= d.
  ModelConfig resolved() const;
};

struct TrainedModel {
  ModelConfig config;
  BinaryCodeMatrix w;  // d_out x d, exactly c ones per row
  double objective = 0.0;
  std::uint32_t iterations = 0;
  std::uint64_t seed = 0;
};

}  // namespace wtahash
