#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "rsk/matrix.hpp"
#include "rsk/preprocess.hpp"

namespace rsk::io {

enum class FileFormat { kCsv, kRawbin };

/// .csv → csv; .bin/.rsk/.rawbin → rawbin; otherwise sniffs the magic.
FileFormat detect_format(const std::filesystem::path& path);

/// Rows are stimuli, columns units. Comma separated, optional trailing
/// CR, blank trailing lines ignored. Errors carry the 1-based line.
Matrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const Matrix& m);

/// rawbin: "RSK1", u64 rows, u64 cols (little-endian), then rows·cols
/// little-endian IEEE-754 doubles in row-major order.
Matrix read_rawbin(std::istream& in);
void write_rawbin(std::ostream& out, const Matrix& m);

inline constexpr std::string_view kRawbinMagic = "RSK1";

ActivationMatrix load_activations(const std::filesystem::path& path);
ActivationMatrix load_activations(const std::filesystem::path& path, FileFormat format);
void save_matrix(const std::filesystem::path& path, const Matrix& m, FileFormat format);

}  // namespace rsk::io
