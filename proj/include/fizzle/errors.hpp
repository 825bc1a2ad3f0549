#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fizzle {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (expressions, delta formulas, rationals).
struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  std::size_t offset;
};

// Input parsed but falls outside the supported fragment
// (unknown function names, sin-in-sin nesting, and so on).
struct UnsupportedError : Error {
  using Error::Error;
};

// A mathematical precondition failed: pole at the center, wrong stated
// limit, mismatched claims fed to a combinator, zero at the center, ...
struct MathError : Error {
  using Error::Error;
};

// Division by an exact zero while evaluating a rational function.
struct PoleError : MathError {
  using MathError::MathError;
};

// sin enclosure asked for an argument outside |t| <= 2.
struct EnclosureRangeError : MathError {
  using MathError::MathError;
};

// Serialized witness does not match the expected schema.
struct SchemaError : Error {
  using Error::Error;
};

}  // namespace fizzle
