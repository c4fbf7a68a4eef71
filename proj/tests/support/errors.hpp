#pragma once

#include <optional>

#include "lccp/error.hpp"

namespace lccp::testing {

// Kind of the lccp::Error thrown by fn, or nullopt if it returned normally.
template <class Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace lccp::testing
