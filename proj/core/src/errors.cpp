#include "dsirs/errors.hpp"

namespace dsirs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnequalTotals: return "UnequalTotals";
    case ErrorKind::PriceExceedsMaxUtility: return "PriceExceedsMaxUtility";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownResource: return "UnknownResource";
    case ErrorKind::NotAPartition: return "NotAPartition";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroTotalUtility: return "ZeroTotalUtility";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::BadGuess: return "BadGuess";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::RowSumNot1000: return "RowSumNot1000";
    case ErrorKind::SameAgentSampled: return "SameAgentSampled";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

}  // namespace dsirs
