#include "kv_file.hpp"

#include "spa/csv.hpp"
#include "spa/error.hpp"

#include <fstream>

namespace spa::cli {

namespace {

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

KvFile KvFile::read(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  KvFile file;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#')
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(path.string(), number, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (file.get(key))
      throw ParseError(path.string(), number, "duplicate key " + key);
    file.entries_.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return file;
}

void KvFile::write(const std::filesystem::path& path, const std::string& comment) const
{
  auto out = csv::open_for_write(path);
  if (!comment.empty())
    out << "# " << comment << '\n';
  for (const auto& [key, value] : entries_)
    out << key << '=' << value << '\n';
  if (!out)
    throw IoError("failed writing " + path.string());
}

void KvFile::set(const std::string& key, const std::string& value)
{
  for (auto& entry : entries_)
    if (entry.first == key) {
      entry.second = value;
      return;
    }
  entries_.emplace_back(key, value);
}

std::optional<std::string> KvFile::get(const std::string& key) const
{
  for (const auto& entry : entries_)
    if (entry.first == key)
      return entry.second;
  return std::nullopt;
}

std::string KvFile::require(const std::string& key) const
{
  auto v = get(key);
  if (!v)
    throw std::invalid_argument("missing key '" + key + "'");
  return *v;
}

} // namespace spa::cli
