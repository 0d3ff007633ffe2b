#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace spa {

// Contract violations and bad arguments are reported with std::invalid_argument
// and std::out_of_range. The types below cover failures that callers are
// expected to distinguish.

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Every incremental weight of a reweighting step was zero.
class DegeneracyError : public NumericalError
{
public:
  DegeneracyError(std::size_t step, const std::string& what)
    : NumericalError(what), step_(step)
  {
  }

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// Malformed input file. Line numbers are 1-based and count the header.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::string path, std::size_t line, const std::string& message)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
      path_(std::move(path)), line_(line)
  {
  }

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string path_;
  std::size_t line_;
};

/// File system failures (missing files, unwritable directories).
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace spa
