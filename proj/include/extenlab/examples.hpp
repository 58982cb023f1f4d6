#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "extenlab/certificates.hpp"
#include "extenlab/dyadic.hpp"

namespace extenlab {

struct ReportRow {
  std::string label;
  std::optional<std::size_t> n;
  std::optional<double> sup;        // sup distance to the limit, or the row's measured quantity
  std::optional<double> sup_upper;  // sup + (omega_f + omega_g)(eps) when sup is a sup distance
  std::string kind;                 // certificate kind or check name
  VerdictStatus status = VerdictStatus::verified;
  double margin = 0.0;
  std::string note;
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::string example;
  std::string anchor;
  Dyadic resolution;
  std::size_t n_max = 0;
  std::vector<ReportRow> rows;
  std::vector<ReportCheck> checks;
  std::string conclusion;
  double seconds = 0.0;  // wall time, reported only on request

  bool verified() const;
  /// 0 all verified, 2 a verification refuted, 4 an internal inconsistency.
  int exit_code() const;
};

struct ExampleInfo {
  std::string name;
  std::string anchor;
  std::string summary;
  Dyadic default_resolution;
  std::size_t default_n_max = 0;
};

/// The twelve shipped examples; "pathcomp" is accepted as an alias of sine-not-eclosed.
std::vector<ExampleInfo> list_examples();
const ExampleInfo& example_info(const std::string& name);

struct ExampleParams {
  std::optional<Dyadic> resolution;
  std::optional<std::size_t> n_max;
};

/// Throws unknown_name, not_dyadic, beyond_truncation or invalid_argument on bad
/// parameters; verification failures are reported in the Report instead.
Report run_example(const std::string& name, const ExampleParams& params = {});

}  // namespace extenlab
