#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsirs {

enum class ErrorKind {
  UnequalTotals,
  PriceExceedsMaxUtility,
  NegativeValue,
  ValueOutOfRange,
  DuplicateName,
  UnknownResource,
  NotAPartition,
  EmptyInput,
  ZeroTotalUtility,
  Infeasible,
  InstanceTooLarge,
  BadGuess,
  MalformedRow,
  RowSumNot1000,
  SameAgentSampled,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this exception; what() is prefixed with
// the kind name so command-line diagnostics carry it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace dsirs
