#ifndef TRG_ERROR_HPP
#define TRG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trg {

// Base for every error the library raises. The CLI maps subclasses onto
// stable exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input file missing, unreadable, or empty.
class NoInputError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Data refers to something that does not exist (unknown id, unknown fragment).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace trg

#endif  // TRG_ERROR_HPP
