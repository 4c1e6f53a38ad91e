#pragma once

// MWT1 binary tensor format:
//   "MWT1" | u32 order N | N x u64 extents | prod(extents) x f64 values
// All integers and floats little-endian; values in canonical linearization.

#include "multiway/tensor.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multiway::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_mwt1(const DenseTensor& t);
DenseTensor decode_mwt1(std::span<const std::uint8_t> bytes);

DenseTensor read_mwt1(const std::filesystem::path& path);
void write_mwt1(const std::filesystem::path& path, const DenseTensor& t);

/// Rows x cols CSV of numbers (comma separated, optional blank lines).
Matrix read_csv_matrix(const std::filesystem::path& path);
Matrix parse_csv_matrix(std::string_view text);
std::string format_csv_matrix(const Matrix& m);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace multiway::io
