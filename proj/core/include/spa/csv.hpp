#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace spa::csv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

std::vector<std::string> split_row(std::string_view line);

double parse_double(std::string_view field, const std::string& path, std::size_t line);
long long parse_integer(std::string_view field, const std::string& path, std::size_t line);

/// Whole file as rows of fields; trailing '\r' stripped, blank lines skipped.
/// Row i corresponds to physical line `lines[i]`.
struct Table
{
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

Table read_table(const std::filesystem::path& path);

/// Opens `path` for writing, creating parent directories. Throws IoError.
std::ofstream open_for_write(const std::filesystem::path& path);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace spa::csv
