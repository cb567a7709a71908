#include "simaudit/error.hpp"

namespace simaudit {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BadValue: return "BadValue";
    case Errc::NoCommonVocab: return "NoCommonVocab";
    case Errc::OverlappingPiles: return "OverlappingPiles";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::BadK: return "BadK";
    case Errc::VocabMismatch: return "VocabMismatch";
    case Errc::Mismatch: return "Mismatch";
    case Errc::DegenerateBaselineValue: return "DegenerateBaselineValue";
    case Errc::EmptyDescription: return "EmptyDescription";
    case Errc::DegenerateDistanceRow: return "DegenerateDistanceRow";
    case Errc::EmptyClustering: return "EmptyClustering";
    case Errc::BadDimension: return "BadDimension";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

ErrorCategory category_of(Errc code) {
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidArgument:
      return ErrorCategory::Config;
    case Errc::ZeroVector:
    case Errc::DegenerateBaselineValue:
    case Errc::DegenerateDistanceRow:
    case Errc::NumericalFailure:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace simaudit
