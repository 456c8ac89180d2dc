// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_ERRORS_HPP
#define GRIDPOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridpop {

/// Failure categories surfaced by the command-line tools. Every pipeline
/// failure maps to exactly one of these; the CLI prints the category name
/// followed by a one-line message.
enum class ErrorCategory {
    ParseError,
    CrsMismatch,
    IoFailure,
};

const char* to_string(ErrorCategory cat);

/// Base class for pipeline errors (bad input files, CRS conflicts, I/O).
class Error : public std::runtime_error {
  public:
    Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg)
      , category_(cat)
    {
    }

    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg)
      : Error(ErrorCategory::ParseError, msg)
    {
    }
};

/// ASCII-grid header problems: missing, duplicate, or unsupported keys.
struct MalformedHeader : ParseError {
    using ParseError::ParseError;
};

/// Wrong number of data tokens in an ASCII grid body.
struct TokenCountMismatch : ParseError {
    using ParseError::ParseError;
};

/// A data token that does not parse as a finite number.
struct NonNumericToken : ParseError {
    using ParseError::ParseError;
};

/// A CSV whose header does not match the expected schema.
struct SchemaError : ParseError {
    using ParseError::ParseError;
};

struct CrsMismatch : Error {
    explicit CrsMismatch(const std::string& msg)
      : Error(ErrorCategory::CrsMismatch, msg)
    {
    }
};

struct IoFailure : Error {
    explicit IoFailure(const std::string& msg)
      : Error(ErrorCategory::IoFailure, msg)
    {
    }
};

// Contract violations. These indicate misuse of the library API rather than
// bad pipeline input, so they sit on the standard exception hierarchy.

struct OutOfBounds : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyDataset : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyChain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativePopulation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gridpop

#endif // GRIDPOP_ERRORS_HPP
