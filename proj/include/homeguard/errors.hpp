#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homeguard {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyMessageError : public Error {
 public:
  EmptyMessageError() : Error("message text is empty or whitespace-only") {}
};

// Prefilter rejection. An explicit outcome so operators can audit it.
class NotEmergencyError : public Error {
 public:
  explicit NotEmergencyError(std::string reason)
      : Error("message rejected by emergency prefilter: " + reason),
        reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class AssetError : public Error {
 public:
  using Error::Error;
};

class LexiconFormatError : public Error {
 public:
  LexiconFormatError(std::size_t line, const std::string& what)
      : Error("lexicon line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TurtleSyntaxError : public Error {
 public:
  TurtleSyntaxError(std::size_t line, std::size_t column, const std::string& what)
      : Error("turtle syntax error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownPrefixError : public Error {
 public:
  explicit UnknownPrefixError(const std::string& prefix)
      : Error("unknown prefix: " + prefix) {}
};

class MalformedQueryError : public Error {
 public:
  MalformedQueryError(std::size_t position, const std::string& what)
      : Error("malformed query at offset " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class OutOfRangeCoordinateError : public Error {
 public:
  using Error::Error;
};

class NoSuchServiceTypeError : public Error {
 public:
  using Error::Error;
};

class UnknownLevelError : public Error {
 public:
  using Error::Error;
};

class StoreIoError : public Error {
 public:
  using Error::Error;
};

}  // namespace homeguard
