#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oodoc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: missing directories, malformed names, bad flags.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string path, int line, const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

 private:
  std::string path_;
  int line_;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

// Unknown element or attribute in an exchange document.
class SchemaError : public Error {
 public:
  SchemaError(long line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

// A count attribute that disagrees with the children it summarizes.
class ConsistencyError : public Error {
 public:
  ConsistencyError(long line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace oodoc
