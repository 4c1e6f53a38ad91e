#include "multiway/io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace multiway::io {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'W', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "MWT1 encoding assumes a little-endian host");

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T value) {
  std::array<std::uint8_t, sizeof(T)> raw{};
  std::memcpy(raw.data(), &value, sizeof(T));
  out.insert(out.end(), raw.begin(), raw.end());
}

template <typename T>
T read_le(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (offset + sizeof(T) > bytes.size()) throw FormatError("MWT1: truncated input");
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  offset += sizeof(T);
  return value;
}

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int base64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::vector<std::uint8_t> encode_mwt1(const DenseTensor& t) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 + 8 * t.order() + 8 * t.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  append_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
  for (auto e : t.shape()) append_le<std::uint64_t>(out, e);
  for (double v : t.data()) append_le<double>(out, v);
  return out;
}

DenseTensor decode_mwt1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0) {
    throw FormatError("MWT1: bad magic bytes");
  }
  std::size_t offset = 4;
  const auto order = read_le<std::uint32_t>(bytes, offset);
  if (order == 0) throw FormatError("MWT1: order must be at least 1");
  Shape shape(order);
  std::size_t count = 1;
  for (auto& e : shape) {
    const auto ext = read_le<std::uint64_t>(bytes, offset);
    if (ext == 0) throw FormatError("MWT1: zero extent");
    e = static_cast<std::size_t>(ext);
    if (count > (bytes.size() / 8) / e + 1) throw FormatError("MWT1: extents exceed payload");
    count *= e;
  }
  if (bytes.size() - offset != count * sizeof(double)) {
    throw FormatError("MWT1: payload length does not match extents");
  }
  std::vector<double> data(count);
  std::memcpy(data.data(), bytes.data() + offset, count * sizeof(double));
  return DenseTensor(std::move(shape), std::move(data));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

DenseTensor read_mwt1(const std::filesystem::path& path) { return decode_mwt1(read_file(path)); }

void write_mwt1(const std::filesystem::path& path, const DenseTensor& t) {
  const auto bytes = encode_mwt1(t);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Matrix parse_csv_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw FormatError("CSV: not a number: '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw FormatError("CSV: trailing characters in '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("CSV: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw FormatError("CSV: no data");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_csv_matrix(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string format_csv_matrix(const Matrix& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64: length not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::uint32_t v = 0;
    int pad = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      int d = 0;
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) throw FormatError("base64: misplaced padding");
        ++pad;
      } else {
        if (pad > 0) throw FormatError("base64: data after padding");
        d = base64_value(c);
        if (d < 0) throw FormatError("base64: invalid character");
      }
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace multiway::io
