#pragma once

#include <stdexcept>
#include <string>

namespace hamsing {

/// Domain error with a stable machine-readable code. Codes mirror the failure
/// modes of the individual engines (IndexOutsideClass, GammaNonzero, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace hamsing
