#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace kgl {

enum class ErrorKind {
  DanglingReference,
  SquareNotBijective,
  CubeInconsistent,
  SourceVertex,
  NotComposable,
  DegreeOutOfRange,
  PartialTableMiss,
  WrongValueGroup,
  GroupMismatch,
  GraphMismatch,
  LevelTooLow,
  DepthTooShallow,
  NotDisjointBisection,
  EmptyWindow,
  NotDegreeCoboundary,
  MissingCertificate,
  UnsupportedRank,
  Unsupported,
  ParseError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Domain error carrying a machine-readable payload.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, nlohmann::json payload = nlohmann::json::object());

  ErrorKind kind() const { return kind_; }
  const nlohmann::json& payload() const { return payload_; }
  nlohmann::json to_json() const;

 private:
  ErrorKind kind_;
  nlohmann::json payload_;
};

}  // namespace kgl
