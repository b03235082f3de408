#pragma once

#include <stdexcept>
#include <string>

namespace douglaskit {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible shapes (algebra blocks, module rows, operator domains).
struct ShapeError : Error {
  using Error::Error;
};

/// Input violates an operation's precondition (non-self-adjoint element
/// where a self-adjoint one is required, non-positive s, zero element, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

/// The mathematical hypothesis of a lemma verifier does not hold for the
/// given inputs (x <= y fails, a^2 <= b^2 already holds so no witness
/// exists, ...). Distinct from InvalidInputError: the inputs are well
/// formed, the statement simply does not apply.
struct HypothesisError : Error {
  using Error::Error;
};

/// An internal cross-check failed. The library prefers to fail loudly over
/// returning a number whose two independent computations disagree.
struct NumericError : Error {
  using Error::Error;
};

/// Malformed serialized data. Carries the byte offset plus the derived
/// line/column when they are known.
struct FormatError : Error {
  FormatError(const std::string& what, std::size_t byte, std::size_t line,
              std::size_t column)
      : Error(what), byte_offset(byte), line(line), column(column) {}
  explicit FormatError(const std::string& what) : Error(what) {}

  std::size_t byte_offset = 0;
  std::size_t line = 0;    // 1-based, 0 when unknown
  std::size_t column = 0;  // 1-based, 0 when unknown
};

}  // namespace douglaskit
