#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal comma-separated I/O. Fields never contain embedded commas or quotes
// in the formats this project reads, so no quoting rules are implemented.
namespace p2e::csv {

struct Table {
  std::vector<std::string> header;
  // Raw rows; a row may have the wrong width; callers decide what that means.
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws IngestError if absent.
  std::size_t require_column(std::string_view name) const;
  /// Throws DomainError unless row r has exactly header.size() fields.
  void require_width(std::size_t r) const;
};

std::vector<std::string> split_line(std::string_view line);

/// Parses text; the first non-empty line is the header.
Table parse(std::string_view text);

/// Reads and parses a file; throws IoError if it cannot be opened.
Table read_file(const std::string& path);

std::string read_text(const std::string& path);

/// Writes via a sibling temp file and rename; throws IoError on failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::int64_t parse_int(std::string_view s, std::string_view field, std::size_t line);
double parse_double(std::string_view s, std::string_view field, std::size_t line);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace p2e::csv
