#include "wtahash/io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace wtahash {

namespace {

void append_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void append_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

struct Reader {
  const std::string& path;
  const std::vector<unsigned char>& buf;
  std::size_t pos = 0;

  void need(std::size_t n, const char* what) {
    if (pos + n > buf.size()) throw FormatError(path, pos, std::string("truncated ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
};

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open file");
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(buf.data()), size);
  if (!in) throw FormatError(path, 0, "read failure");
  return buf;
}

void write_with_checksum(const std::string& path, std::vector<unsigned char>& buf) {
  append_u64(buf, fnv1a64(buf.data(), buf.size()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path, 0, "cannot open file for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(path, 0, "write failure");
}

void verify_checksum(const std::string& path, const std::vector<unsigned char>& buf) {
  if (buf.size() < 8) throw FormatError(path, 0, "file too short for checksum");
  const std::size_t body = buf.size() - 8;
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(buf[body + i]) << (8 * i);
  const std::uint64_t computed = fnv1a64(buf.data(), body);
  if (stored != computed) throw FormatError(path, body, "checksum mismatch");
}

void check_magic(Reader& r, const char* magic) {
  r.need(4, "magic");
  if (std::memcmp(r.buf.data() + r.pos, magic, 4) != 0)
    throw FormatError(r.path, r.pos, std::string("bad magic, expected ") + magic);
  r.pos += 4;
}

}  // namespace

FormatError::FormatError(const std::string& p, std::uint64_t off, const std::string& message)
    : std::runtime_error(p + " @" + std::to_string(off) + ": " + message),
      path(p),
      byte_offset(off) {}

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_model(const std::string& path, const TrainedModel& model) {
  const ModelConfig& cfg = model.config;
  std::vector<unsigned char> buf;
  buf.reserve(28 + model.w.all_indices().size() * 4 + 8);
  buf.insert(buf.end(), {'W', 'T', 'A', 'H'});
  append_u32(buf, 1);  // format version
  append_u32(buf, cfg.d);
  append_u32(buf, cfg.d_out);
  append_u32(buf, cfg.k);
  append_u32(buf, cfg.c);
  append_u64(buf, cfg.seed);
  for (std::uint32_t idx : model.w.all_indices()) append_u32(buf, idx);
  write_with_checksum(path, buf);
}

TrainedModel load_model(const std::string& path) {
  const std::vector<unsigned char> buf = read_file(path);
  verify_checksum(path, buf);
  Reader r{path, buf};
  check_magic(r, "WTAH");
  const std::uint32_t version = r.u32("version");
  if (version != 1)
    throw FormatError(path, r.pos - 4, "unsupported version " + std::to_string(version));
  ModelConfig cfg;
  cfg.d = r.u32("d");
  cfg.d_out = r.u32("d_out");
  cfg.k = r.u32("k");
  cfg.c = r.u32("c");
  cfg.seed = r.u64("seed");

  const std::size_t count = static_cast<std::size_t>(cfg.d_out) * cfg.c;
  std::vector<std::uint32_t> indices(count);
  for (std::size_t i = 0; i < count; ++i) indices[i] = r.u32("row indices");
  if (r.pos + 8 != buf.size()) throw FormatError(path, r.pos, "trailing bytes after row indices");

  TrainedModel model;
  model.config = cfg;
  model.seed = cfg.seed;
  try {
    model.w = BinaryCodeMatrix(cfg.d_out, cfg.d, cfg.c, BitAxis::kPerRow, std::move(indices));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path, 28, e.what());
  }
  return model;
}

void save_codes(const std::string& path, const BinaryCodeMatrix& codes) {
  if (codes.axis() != BitAxis::kPerColumn)
    throw std::invalid_argument("save_codes: expects per-column codes");
  CodesWriter writer(path, codes.rows(), codes.cols(), codes.weight());
  for (std::size_t m = 0; m < codes.cols(); ++m) writer.append(codes.slot_indices(m));
  writer.finish();
}

CodesWriter::CodesWriter(const std::string& path, std::size_t rows, std::size_t cols,
                         std::uint32_t weight)
    : path_(path),
      out_(path, std::ios::binary | std::ios::trunc),
      checksum_(0xcbf29ce484222325ULL),
      declared_cols_(cols),
      weight_(weight),
      rows_(rows) {
  if (!out_) throw FormatError(path, 0, "cannot open file for writing");
  std::vector<unsigned char> header;
  header.insert(header.end(), {'W', 'T', 'A', 'Y'});
  append_u32(header, 1);
  append_u32(header, static_cast<std::uint32_t>(rows));
  append_u32(header, static_cast<std::uint32_t>(cols));
  append_u32(header, weight);
  put(header.data(), header.size());
}

CodesWriter::~CodesWriter() {
  if (!finished_ && written_cols_ == declared_cols_) {
    try {
      finish();
    } catch (...) {
    }
  }
}

void CodesWriter::put(const void* data, std::size_t n) {
  checksum_ = fnv1a64(data, n, checksum_);
  out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out_) throw FormatError(path_, 0, "write failure");
}

void CodesWriter::append(std::span<const std::uint32_t> column_indices) {
  if (finished_) throw std::logic_error("CodesWriter: append after finish");
  if (written_cols_ == declared_cols_)
    throw std::logic_error("CodesWriter: more columns than declared");
  if (column_indices.size() != weight_)
    throw std::invalid_argument("CodesWriter: column weight mismatch");
  std::vector<unsigned char> buf;
  buf.reserve(column_indices.size() * 4);
  for (std::size_t i = 0; i < column_indices.size(); ++i) {
    if (column_indices[i] >= rows_ || (i > 0 && column_indices[i] <= column_indices[i - 1]))
      throw std::invalid_argument("CodesWriter: indices must be ascending and in range");
    append_u32(buf, column_indices[i]);
  }
  put(buf.data(), buf.size());
  ++written_cols_;
}

void CodesWriter::finish() {
  if (finished_) return;
  if (written_cols_ != declared_cols_)
    throw std::logic_error("CodesWriter: fewer columns than declared");
  std::vector<unsigned char> tail;
  append_u64(tail, checksum_);
  out_.write(reinterpret_cast<const char*>(tail.data()),
             static_cast<std::streamsize>(tail.size()));
  out_.flush();
  if (!out_) throw FormatError(path_, 0, "write failure");
  finished_ = true;
}

BinaryCodeMatrix load_codes(const std::string& path) {
  const std::vector<unsigned char> buf = read_file(path);
  verify_checksum(path, buf);
  Reader r{path, buf};
  check_magic(r, "WTAY");
  const std::uint32_t version = r.u32("version");
  if (version != 1)
    throw FormatError(path, r.pos - 4, "unsupported version " + std::to_string(version));
  const std::uint32_t rows = r.u32("rows");
  const std::uint32_t cols = r.u32("cols");
  const std::uint32_t weight = r.u32("weight");
  const std::size_t count = static_cast<std::size_t>(cols) * weight;
  std::vector<std::uint32_t> indices(count);
  for (std::size_t i = 0; i < count; ++i) indices[i] = r.u32("column indices");
  if (r.pos + 8 != buf.size())
    throw FormatError(path, r.pos, "trailing bytes after column indices");
  try {
    return BinaryCodeMatrix(rows, cols, weight, BitAxis::kPerColumn, std::move(indices));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path, 20, e.what());
  }
}

}  // namespace wtahash
