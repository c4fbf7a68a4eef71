#include "lccp/error.hpp"

namespace lccp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroSize: return "ZeroSize";
    case ErrorKind::NonBijection: return "NonBijection";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SizeExceedsN: return "SizeExceedsN";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::IdOutOfRange: return "IdOutOfRange";
    case ErrorKind::InvalidTarget: return "InvalidTarget";
    case ErrorKind::UnsupportedHistory: return "UnsupportedHistory";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::Unrecoverable: return "Unrecoverable";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::TargetExceedsN: return "TargetExceedsN";
    case ErrorKind::TooSmallN: return "TooSmallN";
    case ErrorKind::TooLargeN: return "TooLargeN";
    case ErrorKind::UnsupportedSupport: return "UnsupportedSupport";
  }
  return "Unknown";
}

}  // namespace lccp
