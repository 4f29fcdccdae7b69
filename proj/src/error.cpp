#include "catdel/error.hpp"

namespace catdel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotAPullback: return "NotAPullback";
    case ErrorKind::AgentMismatch: return "AgentMismatch";
    case ErrorKind::CodomainMismatch: return "CodomainMismatch";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::UnknownAtom: return "UnknownAtom";
    case ErrorKind::UnknownAgent: return "UnknownAgent";
    case ErrorKind::UnknownEvent: return "UnknownEvent";
    case ErrorKind::UnresolvedEventModel: return "UnresolvedEventModel";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::VariableCapture: return "VariableCapture";
    case ErrorKind::OpenPrecondition: return "OpenPrecondition";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotReducible: return "NotReducible";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t line, std::size_t column, std::string expected,
                       std::string found)
    : Error(ErrorKind::ParseError,
            std::to_string(line) + ":" + std::to_string(column) + ": expected " +
                expected + ", found " + (found.empty() ? "end of input" : "'" + found + "'")),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace catdel
