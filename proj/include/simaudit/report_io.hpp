#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace simaudit {

// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest text that parses back to exactly `x`.
std::string format_double(double x);

// `digits` significant digits, %g style.
std::string format_sig(double x, int digits);

// Parses a finite double; throws BadValue.
double parse_double(std::string_view text);

// One RFC 4180 record (quoted fields, doubled quotes). No embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view field);

// Lines with trailing '\r' stripped.
std::vector<std::string> split_lines(std::string_view text);

std::string sha256_hex(std::string_view data);

}  // namespace simaudit
