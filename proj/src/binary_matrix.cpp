#include "wtahash/binary_matrix.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace wtahash {

BinaryCodeMatrix::BinaryCodeMatrix(std::size_t rows, std::size_t cols, std::uint32_t weight,
                                   BitAxis axis, std::vector<std::uint32_t> indices)
    : rows_(rows), cols_(cols), weight_(weight), axis_(axis), indices_(std::move(indices)) {
  const std::size_t len = slot_length();
  const std::size_t nslots = slots();
  if (weight_ == 0 || weight_ > len)
    throw std::invalid_argument("BinaryCodeMatrix: weight must be in [1, slot length]");
  if (indices_.size() != nslots * weight_)
    throw std::invalid_argument("BinaryCodeMatrix: index list size mismatch");

  words_per_slot_ = (len + 63) / 64;
  words_.assign(nslots * words_per_slot_, 0);
  for (std::size_t s = 0; s < nslots; ++s) {
    const std::uint32_t* idx = indices_.data() + s * weight_;
    std::uint64_t* w = words_.data() + s * words_per_slot_;
    for (std::uint32_t i = 0; i < weight_; ++i) {
      if (idx[i] >= len)
        throw std::invalid_argument("BinaryCodeMatrix: index " + std::to_string(idx[i]) +
                                    " out of range in slot " + std::to_string(s));
      if (i > 0 && idx[i] <= idx[i - 1])
        throw std::invalid_argument("BinaryCodeMatrix: indices not strictly ascending in slot " +
                                    std::to_string(s));
      w[idx[i] >> 6] |= 1ULL << (idx[i] & 63);
    }
  }
}

bool BinaryCodeMatrix::bit(std::size_t r, std::size_t c) const {
  const std::size_t slot = axis_ == BitAxis::kPerColumn ? c : r;
  const std::size_t pos = axis_ == BitAxis::kPerColumn ? r : c;
  return (words_[slot * words_per_slot_ + (pos >> 6)] >> (pos & 63)) & 1;
}

std::uint64_t BinaryCodeMatrix::hamming(std::size_t a, std::size_t b) const {
  const std::uint64_t* wa = words_.data() + a * words_per_slot_;
  const std::uint64_t* wb = words_.data() + b * words_per_slot_;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words_per_slot_; ++i) total += std::popcount(wa[i] ^ wb[i]);
  return total;
}

}  // namespace wtahash
