#pragma once

#include <stdexcept>
#include <string>

namespace pairlens {

/// Error categories surfaced by the library. The CLI maps these onto exit codes
/// and the machine-readable error JSON written to stderr.
enum class ErrorKind {
  config,      // bad configuration, missing lexicon, invalid parameters
  io,          // unreadable / unwritable streams and files
  validation,  // input data violates a documented schema or precondition
  degenerate,  // statistically degenerate input (zero variance, empty split...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

}  // namespace pairlens
