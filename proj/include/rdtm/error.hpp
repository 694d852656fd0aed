#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdtm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or term text. `position()` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Argument outside an operation's domain (bad grid, missing spectrum index, t out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Overflow, non-finite values, or expression growth past the node cap.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NodeCapError : public NumericError {
 public:
  NodeCapError(std::size_t nodes, std::size_t cap, long subdomain = -1)
      : NumericError(describe(nodes, cap, subdomain)), nodes_(nodes), cap_(cap), subdomain_(subdomain) {}

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t cap() const noexcept { return cap_; }
  /// Index of the subdomain being solved, or -1 when unknown.
  long subdomain() const noexcept { return subdomain_; }

  NodeCapError in_subdomain(long index) const { return NodeCapError(nodes_, cap_, index); }

 private:
  static std::string describe(std::size_t nodes, std::size_t cap, long subdomain) {
    std::string msg = "expression has " + std::to_string(nodes) + " nodes, cap is " + std::to_string(cap);
    if (subdomain >= 0) msg = "subdomain " + std::to_string(subdomain) + ": " + msg;
    return msg;
  }

  std::size_t nodes_;
  std::size_t cap_;
  long subdomain_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdtm
