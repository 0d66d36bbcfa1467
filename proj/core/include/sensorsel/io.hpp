#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sensorsel/matrix.hpp"

namespace sensorsel {

/// On-disk matrix encodings.
///
/// Csv: one variable per row, comma-separated snapshot values; lines whose
/// first non-space character is '#' are comments.
///
/// Dmat: binary; magic "DMAT", version byte 0x01, uint32 little-endian row
/// then column counts, then rows×cols IEEE-754 doubles, little-endian,
/// row-major.
enum class MatrixFormat { Csv, Dmat };

MatrixFormat matrix_format_from_string(std::string_view name);
std::string_view to_string(MatrixFormat format);

/// Infer the format from a file extension (".dmat" → Dmat, else Csv).
MatrixFormat guess_format(const std::filesystem::path& path);

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const DataMatrix& matrix, const std::filesystem::path& path,
                 MatrixFormat format);

/// Shortest-exact decimal rendering used everywhere a report prints a
/// double ("%.17g" round-trips bit-exactly).
std::string format_double(double value);

}  // namespace sensorsel
