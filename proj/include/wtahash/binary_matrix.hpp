#pragma once

// Fixed-weight binary matrix: exactly `weight` ones per column (output codes)
// or per row (projection matrices). Stored twice: bit-packed 64-bit words for
// popcount Hamming distance, and per-slot sorted index lists, which are the
// fast path for sparse projection since the weight is far below the slot
// length.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wtahash {

enum class BitAxis { kPerColumn, kPerRow };

class BinaryCodeMatrix {
 public:
  BinaryCodeMatrix() = default;

  // `indices` is slot-major: for slot s, entries [s*weight, (s+1)*weight)
  // are the positions of the ones, strictly ascending. A slot is a column
  // when axis is kPerColumn and a row when axis is kPerRow.
  BinaryCodeMatrix(std::size_t rows, std::size_t cols, std::uint32_t weight,
                   BitAxis axis, std::vector<std::uint32_t> indices);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t weight() const { return weight_; }
  BitAxis axis() const { return axis_; }

  std::size_t slots() const { return axis_ == BitAxis::kPerColumn ? cols_ : rows_; }
  std::size_t slot_length() const { return axis_ == BitAxis::kPerColumn ? rows_ : cols_; }
  std::size_t words_per_slot() const { return words_per_slot_; }

  std::span<const std::uint32_t> slot_indices(std::size_t s) const {
    return {indices_.data() + s * weight_, weight_};
  }
  std::span<const std::uint64_t> slot_words(std::size_t s) const {
    return {words_.data() + s * words_per_slot_, words_per_slot_};
  }
  std::span<const std::uint32_t> all_indices() const { return indices_; }

  bool bit(std::size_t r, std::size_t c) const;

  // Hamming distance between two slots.
  std::uint64_t hamming(std::size_t a, std::size_t b) const;

  friend bool operator==(const BinaryCodeMatrix& a, const BinaryCodeMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t weight_ = 0;
  BitAxis axis_ = BitAxis::kPerColumn;
  std::size_t words_per_slot_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<std::uint64_t> words_;
};

}  // namespace wtahash
