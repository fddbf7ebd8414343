#pragma once

// Binary persistence. Model files ("WTAH") store the configuration plus the
// per-row index lists of the projection matrix; code files ("WTAY") store
// per-column index lists. Both are little-endian with a trailing 64-bit
// FNV-1a checksum of all preceding bytes.

#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "wtahash/binary_matrix.hpp"
#include "wtahash/model.hpp"

namespace wtahash {

struct FormatError : std::runtime_error {
  FormatError(const std::string& path, std::uint64_t byte_offset, const std::string& message);
  std::string path;
  std::uint64_t byte_offset = 0;
};

void save_model(const std::string& path, const TrainedModel& model);

// Objective and iteration count are not persisted; the loaded model carries
// the configuration, seed, and matrix only.
TrainedModel load_model(const std::string& path);

void save_codes(const std::string& path, const BinaryCodeMatrix& codes);
BinaryCodeMatrix load_codes(const std::string& path);

// Incremental code-file writer for streaming producers: the column count is
// declared up front, columns are appended one at a time, and finish() seals
// the file with the checksum. Memory stays independent of the column count.
class CodesWriter {
 public:
  CodesWriter(const std::string& path, std::size_t rows, std::size_t cols, std::uint32_t weight);
  ~CodesWriter();
  void append(std::span<const std::uint32_t> column_indices);
  void finish();

 private:
  void put(const void* data, std::size_t n);
  std::string path_;
  std::ofstream out_;
  std::uint64_t checksum_;
  std::size_t declared_cols_;
  std::size_t written_cols_ = 0;
  std::uint32_t weight_;
  std::size_t rows_;
  bool finished_ = false;
};

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace wtahash
