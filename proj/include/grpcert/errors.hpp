#pragma once

#include <stdexcept>
#include <string>

namespace grpcert {

// Base class for every error raised by the library. Each named failure mode
// gets its own type so callers (and tests) can match on it.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Exact integer arithmetic left the representable range.
struct OverflowError : Error {
  explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// A Cayley table failed the group axioms; carries a witness triple.
struct NotAGroupError : Error {
  NotAGroupError(const std::string& msg, long a, long b, long c)
      : Error(msg), witness{a, b, c} {}
  long witness[3];
};

struct TooLargeError : Error {
  explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

struct BadSpecError : Error {
  explicit BadSpecError(const std::string& msg) : Error(msg) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// No normal rank-two elementary abelian subgroup meeting the center was
// found. Under the documented preconditions this is a refutation witness.
struct NoSuchQError : Error {
  explicit NoSuchQError(const std::string& msg) : Error(msg) {}
};

struct UnclassifiableError : Error {
  explicit UnclassifiableError(const std::string& msg) : Error(msg) {}
};

struct NotACharacterError : Error {
  explicit NotACharacterError(const std::string& msg) : Error(msg) {}
};

struct NoCaseMatchesError : Error {
  explicit NoCaseMatchesError(const std::string& msg) : Error(msg) {}
};

struct NonAbelianIsotropyError : Error {
  explicit NonAbelianIsotropyError(const std::string& msg) : Error(msg) {}
};

struct RankExceedsTargetError : Error {
  explicit RankExceedsTargetError(const std::string& msg) : Error(msg) {}
};

struct NoSuitableCharactersError : Error {
  explicit NoSuitableCharactersError(const std::string& msg) : Error(msg) {}
};

struct MissingAssignmentError : Error {
  explicit MissingAssignmentError(const std::string& msg) : Error(msg) {}
};

struct BadGroupError : Error {
  explicit BadGroupError(const std::string& msg) : Error(msg) {}
};

struct UnsupportedGroupError : Error {
  explicit UnsupportedGroupError(const std::string& msg) : Error(msg) {}
};

struct NotSurjectiveError : Error {
  explicit NotSurjectiveError(const std::string& msg) : Error(msg) {}
};

struct NotEquivariantError : Error {
  explicit NotEquivariantError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace grpcert
