#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "wtahash/io.hpp"
#include "wtahash/rng.hpp"

using namespace wtahash;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/wtahash_io_") + std::to_string(::getpid()) + "_" + name;
}

TrainedModel sample_model(std::uint64_t seed) {
  Rng rng(seed);
  ModelConfig cfg{40, 90, 5, 7, seed};
  std::vector<std::uint32_t> rows(90 * 7);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < 90; ++i) sample_subset_into(rng, 40, 7, pool, rows.data() + i * 7);
  TrainedModel model;
  model.config = cfg;
  model.seed = seed;
  model.objective = 123.5;
  model.iterations = 3;
  model.w = BinaryCodeMatrix(90, 40, 7, BitAxis::kPerRow, std::move(rows));
  return model;
}

}  // namespace

TEST_CASE("model files round-trip bit-exactly") {
  const TrainedModel model = sample_model(77);
  const std::string path = temp_path("model.wtah");
  save_model(path, model);

  const TrainedModel loaded = load_model(path);
  CHECK(loaded.w == model.w);
  CHECK(loaded.config.d == model.config.d);
  CHECK(loaded.config.d_out == model.config.d_out);
  CHECK(loaded.config.k == model.config.k);
  CHECK(loaded.config.c == model.config.c);
  CHECK(loaded.config.seed == model.config.seed);
  std::remove(path.c_str());
}

TEST_CASE("model file layout arithmetic") {
  const TrainedModel model = sample_model(78);
  const std::string path = temp_path("layout.wtah");
  save_model(path, model);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  // magic + version + 4 u32 config + u64 seed + rows + checksum
  const std::size_t expected = 4 + 4 + 16 + 8 + 90 * 7 * 4 + 8;
  CHECK(static_cast<std::size_t>(in.tellg()) == expected);
  std::remove(path.c_str());
}

TEST_CASE("corruption is caught by the checksum") {
  const TrainedModel model = sample_model(79);
  const std::string path = temp_path("corrupt.wtah");
  save_model(path, model);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    char byte = 0;
    f.read(&byte, 1);
    f.seekp(40);
    byte = static_cast<char>(byte ^ 0x40);
    f.write(&byte, 1);
  }
  CHECK_THROWS_WITH_AS((void)load_model(path), doctest::Contains("checksum"), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("model loader rejects truncation and bad magic") {
  const TrainedModel model = sample_model(80);
  const std::string path = temp_path("trunc.wtah");
  save_model(path, model);

  SUBCASE("truncated file") {
    std::ifstream in(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
    bytes.resize(bytes.size() / 2);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS((void)load_model(path), FormatError);
  }

  SUBCASE("wrong magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS((void)load_model(path), FormatError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)load_model(temp_path("nope.wtah")), FormatError);
  }
  std::remove(path.c_str());
}

TEST_CASE("code files round-trip bit-exactly") {
  Rng rng(81);
  std::vector<std::uint32_t> idx(25 * 3);
  std::vector<std::uint32_t> pool;
  for (std::size_t m = 0; m < 25; ++m) sample_subset_into(rng, 60, 3, pool, idx.data() + m * 3);
  const BinaryCodeMatrix codes(60, 25, 3, BitAxis::kPerColumn, std::move(idx));

  const std::string path = temp_path("codes.wtay");
  save_codes(path, codes);
  CHECK(load_codes(path) == codes);

  std::ifstream in(path, std::ios::binary | std::ios::ate);
  const std::size_t expected = 4 + 4 + 12 + 25 * 3 * 4 + 8;
  CHECK(static_cast<std::size_t>(in.tellg()) == expected);
  std::remove(path.c_str());
}

TEST_CASE("empty code files are legal") {
  const BinaryCodeMatrix codes(60, 0, 3, BitAxis::kPerColumn, {});
  const std::string path = temp_path("empty.wtay");
  save_codes(path, codes);
  const BinaryCodeMatrix loaded = load_codes(path);
  CHECK(loaded.cols() == 0);
  CHECK(loaded.rows() == 60);
  CHECK(loaded.weight() == 3);
  std::remove(path.c_str());
}

TEST_CASE("fnv checksum is stable") {
  const char data[] = "abc";
  CHECK(fnv1a64(data, 3) == fnv1a64(data, 3));
  CHECK(fnv1a64(data, 3) != fnv1a64(data, 2));
}
