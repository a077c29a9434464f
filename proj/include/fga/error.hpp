#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fga {

enum class ErrorKind {
  invalid_geometry,
  invalid_input,
  reduction_failure,
  oracle_failure,
  scale,
  over_barrier,
  size_mismatch,
  capacity,
  embedding_incomplete,
  schedule,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every module. The kind is surfaced by the CLI as a
/// machine-readable tag next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fga
