#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmt {

// Raised when a value violates a structural invariant (triple overlap,
// arity mismatch, non-filter, missing interpretation, ...).
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the formula parser; `position` is a 1-based character offset
// into the input text.
struct parse_error : std::runtime_error {
  std::size_t position;
  parse_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
};

}  // namespace pmt
