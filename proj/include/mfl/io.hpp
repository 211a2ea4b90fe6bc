#pragma once

#include <filesystem>
#include <string>

namespace mfl {

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so a failed run never leaves a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Decimal form with 17 significant digits; round-trips every double.
std::string format_double(double v);

} // namespace mfl
