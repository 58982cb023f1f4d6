#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace extenlab {

enum class ErrorKind {
  invalid_argument,
  domain_mismatch,
  unknown_name,
  not_dyadic,
  degenerate_separation,
  extension_failure,
  gluing_mismatch,
  epsilon_too_large,
  loop_too_coarse,
  diameter_too_large,
  refused,
  beyond_truncation,
  invalid_certificate,
  inconsistent_input,
  parse_error,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace extenlab
