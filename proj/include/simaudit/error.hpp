#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simaudit {

enum class Errc {
  DuplicateLabel,
  DimensionMismatch,
  BadValue,
  NoCommonVocab,
  OverlappingPiles,
  UnknownLabel,
  ParseError,
  IoError,
  ZeroVector,
  BadK,
  VocabMismatch,
  Mismatch,
  DegenerateBaselineValue,
  EmptyDescription,
  DegenerateDistanceRow,
  EmptyClustering,
  BadDimension,
  InvalidArgument,
  ConfigError,
  NumericalFailure,
};

std::string_view to_string(Errc code);

// Broad failure class; drives the CLI exit code.
enum class ErrorCategory { Config, Data, Numerical };

ErrorCategory category_of(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace simaudit
