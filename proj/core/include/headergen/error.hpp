#pragma once

#include <stdexcept>
#include <string>

namespace headergen {

// Error taxonomy shared by all modules. The CLI maps input-side kinds to
// exit code 2 and everything else to exit code 1.
enum class ErrorKind {
  MalformedNotebook,
  UnsupportedVersion,
  Io,
  Syntax,
  StubFormat,
  DuplicateFqn,
  TaxonomyFormat,
  TruthFormat,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Input errors are the caller's fault (bad notebook, bad stub file, ...)
  // and map to exit code 2 in the CLI.
  bool is_input_error() const { return kind_ != ErrorKind::Internal; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

} // namespace headergen
