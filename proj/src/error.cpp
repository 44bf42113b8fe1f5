#include "kgl/error.hpp"

namespace kgl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::SquareNotBijective: return "SquareNotBijective";
    case ErrorKind::CubeInconsistent: return "CubeInconsistent";
    case ErrorKind::SourceVertex: return "SourceVertex";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::PartialTableMiss: return "PartialTableMiss";
    case ErrorKind::WrongValueGroup: return "WrongValueGroup";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::GraphMismatch: return "GraphMismatch";
    case ErrorKind::LevelTooLow: return "LevelTooLow";
    case ErrorKind::DepthTooShallow: return "DepthTooShallow";
    case ErrorKind::NotDisjointBisection: return "NotDisjointBisection";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::NotDegreeCoboundary: return "NotDegreeCoboundary";
    case ErrorKind::MissingCertificate: return "MissingCertificate";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::json payload)
    : std::runtime_error(message), kind_(kind), payload_(std::move(payload)) {}

nlohmann::json Error::to_json() const {
  nlohmann::json j;
  j["error"] = to_string(kind_);
  j["message"] = what();
  j["detail"] = payload_;
  return j;
}

}  // namespace kgl
