#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wrcomm {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live over different arity signatures.
struct SignatureMismatchError : Error {
  using Error::Error;
};

/// Bad vertex address, level, label value or signature parameter.
struct InvalidArgumentError : Error {
  using Error::Error;
};

/// Enumeration or closure would exceed the configured order guard.
struct GuardExceededError : Error {
  using Error::Error;
};

/// Pairwise enumeration would exceed the configured pair cap; callers are
/// expected to fall back to per-element solver verification.
struct PairCapExceededError : Error {
  using Error::Error;
};

/// An element failed a subgroup-membership requirement.
struct MembershipError : Error {
  MembershipError(const std::string& what, int level)
      : Error(what), failing_level(level) {}
  int failing_level;  // -1 when not tied to a specific level
};

/// A mandatory self-check failed. This always indicates a bug in the
/// library (or corrupted state), never bad user input.
struct VerificationError : Error {
  using Error::Error;
};

/// Text input rejected; offset is the byte position of the error.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t at)
      : Error(what + " (at byte " + std::to_string(at) + ")"), offset(at) {}
  std::size_t offset;
};

}  // namespace wrcomm
