#include "extenlab/error.hpp"

namespace extenlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::unknown_name: return "unknown-name";
    case ErrorKind::not_dyadic: return "not-dyadic";
    case ErrorKind::degenerate_separation: return "degenerate-separation";
    case ErrorKind::extension_failure: return "extension-failure";
    case ErrorKind::gluing_mismatch: return "gluing-mismatch";
    case ErrorKind::epsilon_too_large: return "epsilon-too-large";
    case ErrorKind::loop_too_coarse: return "loop-too-coarse";
    case ErrorKind::diameter_too_large: return "diameter-too-large";
    case ErrorKind::refused: return "refused";
    case ErrorKind::beyond_truncation: return "beyond-truncation";
    case ErrorKind::invalid_certificate: return "invalid-certificate";
    case ErrorKind::inconsistent_input: return "inconsistent-input";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

}  // namespace extenlab
