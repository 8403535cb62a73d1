#pragma once

#include <stdexcept>
#include <string>

namespace genspace {

enum class ErrorKind {
  config,     // bad configuration or arguments
  data,       // malformed input, missing files, I/O
  numerical,  // degenerate rank, non-finite values, failed calibration
};

/// Every failure surfaced by the library carries a kind so the CLI can map it
/// to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::data, msg); }
[[noreturn]] inline void throw_numerical(const std::string& msg) {
  throw Error(ErrorKind::numerical, msg);
}

/// Process exit code for an error kind: 1 config, 2 data, 3 numerical.
constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
      return 1;
    case ErrorKind::data:
      return 2;
    case ErrorKind::numerical:
      return 3;
  }
  return 2;
}

void warn(const std::string& msg);

}  // namespace genspace
