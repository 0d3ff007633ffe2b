#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spa::cli {

/// Flat `key=value` file. Blank lines and lines starting with '#' are
/// ignored; whitespace around keys and values is trimmed.
class KvFile
{
public:
  using Entry = std::pair<std::string, std::string>;

  KvFile() = default;
  explicit KvFile(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  static KvFile read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path, const std::string& comment = {}) const;

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  /// Throws std::invalid_argument naming the missing key.
  std::string require(const std::string& key) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
  std::vector<Entry> entries_;
};

} // namespace spa::cli
