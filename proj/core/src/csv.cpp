#include "spa/csv.hpp"

#include "spa/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace spa::csv {

std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{})
    throw std::runtime_error("cannot format floating-point value");
  return std::string(buf.data(), ptr);
}

std::vector<std::string> split_row(std::string_view line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
      field.remove_suffix(1);
    out.emplace_back(field);
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, const std::string& path, std::size_t line)
{
  if (field == "nan")
    return std::nan("");
  if (field == "inf")
    return INFINITY;
  if (field == "-inf")
    return -INFINITY;
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last)
    throw ParseError(path, line, "not a number: '" + std::string(field) + "'");
  return value;
}

long long parse_integer(std::string_view field, const std::string& path, std::size_t line)
{
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(path, line, "not an integer: '" + std::string(field) + "'");
  return value;
}

Table read_table(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  Table table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    table.rows.push_back(split_row(line));
    table.lines.push_back(number);
  }
  return table;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + path.string());
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out << ',';
    out << fields[i];
  }
  out << '\n';
}

} // namespace spa::csv
