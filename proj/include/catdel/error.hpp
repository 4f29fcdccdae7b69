#ifndef CATDEL_ERROR_HPP_
#define CATDEL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace catdel {

enum class ErrorKind {
  CarrierMismatch,
  NotAFunction,
  CapExceeded,
  NotAPullback,
  AgentMismatch,
  CodomainMismatch,
  EmptyGroup,
  UnknownAtom,
  UnknownAgent,
  UnknownEvent,
  UnresolvedEventModel,
  UnknownSymbol,
  ArityMismatch,
  VariableCapture,
  OpenPrecondition,
  ParseError,
  SchemaError,
  InvariantViolation,
  NotReducible,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above; the
/// message names the offending element, agent, symbol or witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string expected,
             std::string found);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
  std::string found_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace catdel

#endif  // CATDEL_ERROR_HPP_
