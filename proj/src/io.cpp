#include "rsk/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rsk/error.hpp"

namespace rsk::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  const std::uint64_t le = to_le(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::uint64_t le = 0;
  if (!in.read(reinterpret_cast<char*>(&le), sizeof le)) return false;
  v = to_le(le);
  return true;
}

}  // namespace

Matrix read_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::size_t blank_after_data = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) {
      ++blank_after_data;
      continue;
    }
    if (blank_after_data > 0 && rows > 0) {
      throw ParseError("csv line " + std::to_string(line_no) + ": data after a blank line");
    }
    blank_after_data = 0;
    std::size_t count = 0;
    std::string_view rest = content;
    for (;;) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      ++count;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("csv line " + std::to_string(line_no) + ", field " +
                         std::to_string(count) + ": '" + std::string(cell) + "' is not a number");
      }
      if (!std::isfinite(v)) {
        throw ParseError("csv line " + std::to_string(line_no) + ", field " +
                         std::to_string(count) + ": non-finite value");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("csv: no data rows");
  return Matrix(rows, cols, std::move(values));
}

void write_csv(std::ostream& out, const Matrix& m) {
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.put(',');
      // Shortest round-trip representation.
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
      out.write(buf.data(), res.ptr - buf.data());
    }
    out.put('\n');
  }
}

Matrix read_rawbin(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) ||
      std::string_view(magic.data(), magic.size()) != kRawbinMagic) {
    throw ParseError("rawbin offset 0: missing RSK1 magic");
  }
  std::uint64_t rows = 0, cols = 0;
  if (!get_u64(in, rows) || !get_u64(in, cols)) throw ParseError("rawbin offset 4: truncated header");
  if (rows == 0 || cols == 0) throw ParseError("rawbin offset 4: zero dimension");
  if (rows > (1ull << 32) || cols > (1ull << 32) || rows * cols > (1ull << 34)) {
    throw ParseError("rawbin offset 4: implausible dimensions");
  }
  std::vector<double> values(rows * cols);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint64_t bits = 0;
    if (!get_u64(in, bits)) {
      throw ParseError("rawbin offset " + std::to_string(20 + 8 * k) + ": payload ends after " +
                       std::to_string(k) + " of " + std::to_string(values.size()) + " values");
    }
    values[k] = std::bit_cast<double>(bits);
    if (!std::isfinite(values[k])) {
      throw ParseError("rawbin offset " + std::to_string(20 + 8 * k) + ": non-finite value");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("rawbin offset " + std::to_string(20 + 8 * values.size()) +
                     ": trailing bytes after payload");
  }
  return Matrix(rows, cols, std::move(values));
}

void write_rawbin(std::ostream& out, const Matrix& m) {
  out.write(kRawbinMagic.data(), static_cast<std::streamsize>(kRawbinMagic.size()));
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

FileFormat detect_format(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return FileFormat::kCsv;
  if (ext == ".bin" || ext == ".rsk" || ext == ".rawbin") return FileFormat::kRawbin;
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> magic{};
  if (in.read(magic.data(), magic.size()) &&
      std::string_view(magic.data(), magic.size()) == kRawbinMagic) {
    return FileFormat::kRawbin;
  }
  return FileFormat::kCsv;
}

ActivationMatrix load_activations(const std::filesystem::path& path, FileFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return ActivationMatrix(format == FileFormat::kCsv ? read_csv(in) : read_rawbin(in));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ActivationMatrix load_activations(const std::filesystem::path& path) {
  return load_activations(path, detect_format(path));
}

void save_matrix(const std::filesystem::path& path, const Matrix& m, FileFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  if (format == FileFormat::kCsv) {
    write_csv(out, m);
  } else {
    write_rawbin(out, m);
  }
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

}  // namespace rsk::io
