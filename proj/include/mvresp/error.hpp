#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvresp {

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a byte offset into the input.
class parse_error : public error {
public:
  parse_error(const std::string& message, std::size_t position)
      : error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// The transition system has no (or an ambiguous) row for a state/joint action.
class model_error : public error {
public:
  using error::error;
};

/// A strategy or profile enumeration would exceed the configured ceiling.
class cap_exceeded : public error {
public:
  using error::error;
};

/// An operation was called outside the domain its definition covers.
class precondition_error : public error {
public:
  using error::error;
};

/// A scenario or matrix document could not be turned into a valid system.
class scenario_error : public error {
public:
  using error::error;
};

} // namespace mvresp
