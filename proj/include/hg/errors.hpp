#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hg {

/// Malformed expression source. `offset()` is the byte offset of the
/// offending character (or of the end of input).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Numeric evaluation left the domain of an elementary function, or
/// produced a non-finite value.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// A geometric precondition does not hold (degenerate metric, wrong
/// signature, J^2 != -I, unsupported dimension, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hg
