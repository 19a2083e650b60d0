#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pssc/geometry.hpp"
#include "pssc/report.hpp"

namespace pssc {

enum class CheckFamily { Gate, Curvature, Ricci, Projective, Semisymmetry, RpCondition, Gssf };

const char* to_string(CheckFamily f);

struct CheckInfo {
  std::string id;
  CheckFamily family;
  double tolerance;
  bool gated;         // needs a parallel unit xi
  bool flat_only;     // only asserted when the Levi-Civita curvature vanishes
  std::string summary;
};

/// Every check in report order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(std::string_view id);

struct RunOptions {
  /// Per-check tolerance overrides.
  std::map<std::string, double, std::less<>> tolerances;
  /// When non-empty, only these ids are reported (registry order is kept).
  std::vector<std::string> only;
};

std::vector<CheckReport> check_curvature_identities(const Chart& chart, const SampleSet& samples,
                                                    const RunOptions& opts = {});
std::vector<CheckReport> check_ricci_relations(const Chart& chart, const SampleSet& samples,
                                               const RunOptions& opts = {});
std::vector<CheckReport> check_projective_coincidence(const Chart& chart, const SampleSet& samples,
                                                      const RunOptions& opts = {});
std::vector<CheckReport> check_semisymmetry(const Chart& chart, const SampleSet& samples,
                                            const RunOptions& opts = {});
std::vector<CheckReport> check_rp_condition(const Chart& chart, const SampleSet& samples,
                                            const RunOptions& opts = {});
/// Throws SpecError when the spec carries no phi / f1..f3.
std::vector<CheckReport> check_gssf_example(const Chart& chart, const SampleSet& samples,
                                            const RunOptions& opts = {});

/// The gate record followed by every applicable family. The gssf family is
/// left out for specs without an almost-contact structure.
std::vector<CheckReport> run_checks(const Chart& chart, const SampleSet& samples, const RunOptions& opts = {});

/// True when no reported check failed (skips are fine).
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace pssc
