#pragma once

#include <stdexcept>
#include <string>

namespace bellkit {

enum class ErrorCode {
  invalid_argument,
  invalid_plan,
  corrupted_data,
  model_violation,
  size_limit,
  precondition,
  parse,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto bk_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bellkit
