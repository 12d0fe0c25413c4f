#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetcalc {

/// Thrown when an operation's mathematical precondition is violated
/// (dimension or rank mismatch, axis out of range, exhausted bump budget...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the literal parsers. `position()` is a 0-based offset into the
/// parsed text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw InvalidInput(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace jetcalc
