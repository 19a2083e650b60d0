#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pssc {

enum class CheckStatus { Pass, Fail, Skipped };

/// Outcome of one verification check over a sample set.
///
/// pass is true iff residual_max <= tolerance and the parallel-xi gate is
/// satisfied (or not required). Skipped checks never pass and never fail; the
/// reason is in notes.
struct CheckReport {
  std::string check_id;
  std::string manifold;
  int samples = 0;
  std::uint64_t seed = 0;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string gate_status = "not_required";  // passed | failed | not_required
  CheckStatus status = CheckStatus::Fail;
  std::string notes;
};

const char* to_string(CheckStatus s);

/// Fills residual_max / residual_mean from per-sample residuals and sets
/// pass/status from the tolerance.
void finalize(CheckReport& report, const std::vector<double>& per_sample);

void mark_skipped(CheckReport& report, std::string reason);

nlohmann::json to_json(const CheckReport& r);

/// One line, residuals in scientific notation with 3 significant digits.
std::string to_human(const CheckReport& r);

}  // namespace pssc
