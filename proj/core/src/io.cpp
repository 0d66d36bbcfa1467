#include "sensorsel/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "sensorsel/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "DMAT readers assume a little-endian host");

namespace sensorsel {

namespace {

constexpr char kDmatMagic[4] = {'D', 'M', 'A', 'T'};
constexpr std::uint8_t kDmatVersion = 0x01;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

DataMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t line_number = 0;

  while (std::getline(in, line)) {
    ++line_number;
    std::size_t begin = 0;
    while (begin < line.size() && is_space(line[begin])) ++begin;
    if (begin == line.size() || line[begin] == '#') continue;

    std::size_t row_cols = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      std::size_t first = pos;
      std::size_t last = comma;
      while (first < last && is_space(line[first])) ++first;
      while (last > first && is_space(line[last - 1])) --last;
      if (first == last)
        throw ParseError(path.string() + ": line " + std::to_string(line_number) + ", offset " +
                         std::to_string(pos) + ": empty field");
      double value = 0.0;
      const auto [end, ec] = std::from_chars(line.data() + first, line.data() + last, value);
      if (ec != std::errc() || end != line.data() + last)
        throw ParseError(path.string() + ": line " + std::to_string(line_number) + ", offset " +
                         std::to_string(first) + ": not a number: '" +
                         line.substr(first, last - first) + "'");
      if (!std::isfinite(value))
        throw InvalidMatrix(path.string() + ": line " + std::to_string(line_number) +
                            ": non-finite entry");
      values.push_back(value);
      ++row_cols;
      if (comma == line.size()) break;
      pos = comma + 1;
    }

    if (rows == 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      throw ParseError(path.string() + ": line " + std::to_string(line_number) + ": expected " +
                       std::to_string(cols) + " fields, found " + std::to_string(row_cols));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string() + ": no data rows");
  return DataMatrix(rows, cols, std::move(values));
}

DataMatrix load_dmat(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  const auto fail = [&path](std::size_t offset, const std::string& what) -> ParseError {
    return ParseError(path.string() + ": offset " + std::to_string(offset) + ": " + what);
  };
  if (bytes.size() < 13) throw fail(bytes.size(), "unexpected end of file");
  if (std::memcmp(bytes.data(), kDmatMagic, 4) != 0) throw fail(0, "bad magic");
  if (static_cast<std::uint8_t>(bytes[4]) != kDmatVersion) throw fail(4, "unsupported version");

  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::memcpy(&rows, bytes.data() + 5, 4);
  std::memcpy(&cols, bytes.data() + 9, 4);

  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  const std::size_t expected = 13 + count * sizeof(double);
  if (bytes.size() < expected) throw fail(bytes.size(), "unexpected end of file");
  if (bytes.size() > expected) throw fail(expected, "trailing bytes");

  std::vector<double> values(count);
  std::memcpy(values.data(), bytes.data() + 13, count * sizeof(double));
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(values[i]))
      throw InvalidMatrix(path.string() + ": offset " + std::to_string(13 + i * sizeof(double)) +
                          ": non-finite entry");
  }
  return DataMatrix(rows, cols, std::move(values));
}

}  // namespace

MatrixFormat matrix_format_from_string(std::string_view name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "dmat") return MatrixFormat::Dmat;
  throw ConfigError("unknown matrix format '" + std::string(name) + "' (expected csv or dmat)");
}

std::string_view to_string(MatrixFormat format) {
  return format == MatrixFormat::Csv ? "csv" : "dmat";
}

MatrixFormat guess_format(const std::filesystem::path& path) {
  return path.extension() == ".dmat" ? MatrixFormat::Dmat : MatrixFormat::Csv;
}

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  return format == MatrixFormat::Csv ? load_csv(path) : load_dmat(path);
}

void save_matrix(const DataMatrix& matrix, const std::filesystem::path& path,
                 MatrixFormat format) {
  if (format == MatrixFormat::Csv) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      for (std::size_t j = 0; j < matrix.cols(); ++j) {
        if (j) out << ',';
        out << format_double(matrix(i, j));
      }
      out << '\n';
    }
    if (!out) throw ParseError("write failed: " + path.string());
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out.write(kDmatMagic, 4);
  out.put(static_cast<char>(kDmatVersion));
  const std::uint32_t rows = static_cast<std::uint32_t>(matrix.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(matrix.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  out.write(reinterpret_cast<const char*>(matrix.values().data()),
            static_cast<std::streamsize>(matrix.values().size() * sizeof(double)));
  if (!out) throw ParseError("write failed: " + path.string());
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace sensorsel
