#include "multiway/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include <unistd.h>

namespace multiway {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("multiway_io_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

TEST(Mwt1, HeaderLayout) {
  const DenseTensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  const auto bytes = io::encode_mwt1(t);
  ASSERT_EQ(bytes.size(), 4u + 4u + 2u * 8u + 6u * 8u);
  EXPECT_EQ(std::memcmp(bytes.data(), "MWT1", 4), 0);
  EXPECT_EQ(bytes[4], 2u);
  EXPECT_EQ(bytes[8], 2u);
  EXPECT_EQ(bytes[16], 3u);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + 24, 8);
  EXPECT_EQ(first, 1.0);
}

TEST(Mwt1, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  const auto t = oracle::random_tensor({3, 1, 4, 2}, rng);
  EXPECT_EQ(io::decode_mwt1(io::encode_mwt1(t)), t);
  const auto path = scratch_dir() / "t.mwt1";
  io::write_mwt1(path, t);
  EXPECT_EQ(io::read_mwt1(path), t);
}

TEST(Mwt1, RejectsMalformedInput) {
  auto bytes = io::encode_mwt1(DenseTensor({2, 2}, {1, 2, 3, 4}));
  auto bad_magic = bytes;
  bad_magic[3] = '2';
  EXPECT_THROW(io::decode_mwt1(bad_magic), io::FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(io::decode_mwt1(truncated), io::FormatError);
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(io::decode_mwt1(extra), io::FormatError);
  auto zero_extent = bytes;
  zero_extent[8] = 0;
  EXPECT_THROW(io::decode_mwt1(zero_extent), io::FormatError);
  std::vector<std::uint8_t> huge(bytes.begin(), bytes.begin() + 8);
  for (int i = 0; i < 16; ++i) huge.push_back(0xff);
  EXPECT_THROW(io::decode_mwt1(huge), io::FormatError);
  EXPECT_THROW(io::decode_mwt1(std::vector<std::uint8_t>{}), io::FormatError);
}

TEST(Csv, ParseAndFormat) {
  const Matrix m = io::parse_csv_matrix("1,2,3\n4,5.5,-6\n\n");
  Matrix expect(2, 3);
  expect << 1, 2, 3, 4, 5.5, -6;
  EXPECT_EQ(m, expect);
  EXPECT_EQ(io::parse_csv_matrix(io::format_csv_matrix(expect)), expect);
  EXPECT_THROW(io::parse_csv_matrix("1,2\n3\n"), io::FormatError);
  EXPECT_THROW(io::parse_csv_matrix("1,x\n"), io::FormatError);
  EXPECT_THROW(io::parse_csv_matrix(""), io::FormatError);
}

TEST(Base64, KnownVectorsAndErrors) {
  const std::string text = "multiway";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(io::base64_encode(bytes), "bXVsdGl3YXk=");
  EXPECT_EQ(io::base64_decode("bXVsdGl3YXk="), bytes);
  EXPECT_EQ(io::base64_encode({}), "");
  EXPECT_THROW(io::base64_decode("abc"), io::FormatError);
  EXPECT_THROW(io::base64_decode("a=bc"), io::FormatError);
  EXPECT_THROW(io::base64_decode("ab!c"), io::FormatError);
}

TEST(AtomicWrite, ReplacesContentWithoutLeftovers) {
  const auto dir = scratch_dir() / "atomic";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  const auto bytes = io::read_file(path);
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), "second");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
}

}  // namespace
}  // namespace multiway
