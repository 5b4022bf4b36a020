#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace zipfscale {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_double(double value);

/// In-memory comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Appends a row; throws ConfigError if the width does not match the header.
  void add_row(std::vector<std::string> cells);

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;

  std::string str() const;
  /// Writes to `path`, or to stdout when the path is empty or "-".
  void write(const std::filesystem::path& path) const;

  static CsvTable parse(const std::string& text);
  static CsvTable read(const std::filesystem::path& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string cell(double value) { return format_double(value); }
inline std::string cell(std::uint64_t value) { return std::to_string(value); }
inline std::string cell(const char* value) { return value; }
inline std::string cell(const std::string& value) { return value; }

}  // namespace zipfscale
