#include "pssc/report.hpp"

#include <algorithm>
#include <cstdio>

namespace pssc {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

void finalize(CheckReport& report, const std::vector<double>& per_sample) {
  double mx = 0.0, sum = 0.0;
  for (double v : per_sample) {
    mx = std::max(mx, v);
    sum += v;
  }
  report.residual_max = mx;
  report.residual_mean = per_sample.empty() ? 0.0 : sum / static_cast<double>(per_sample.size());
  bool gate_ok = report.gate_status != "failed";
  report.pass = gate_ok && report.residual_max <= report.tolerance;
  report.status = report.pass ? CheckStatus::Pass : CheckStatus::Fail;
}

void mark_skipped(CheckReport& report, std::string reason) {
  report.pass = false;
  report.status = CheckStatus::Skipped;
  if (!report.notes.empty()) report.notes += "; ";
  report.notes += std::move(reason);
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check_id"] = r.check_id;
  j["manifold"] = r.manifold;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["residual_max"] = r.residual_max;
  j["residual_mean"] = r.residual_mean;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["gate_status"] = r.gate_status;
  j["status"] = to_string(r.status);
  j["notes"] = r.notes;
  return j;
}

std::string to_human(const CheckReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-16s %-16s max=%.2e mean=%.2e tol=%.2e gate=%s", to_string(r.status),
                r.check_id.c_str(), r.manifold.c_str(), r.residual_max, r.residual_mean, r.tolerance,
                r.gate_status.c_str());
  std::string line = buf;
  if (!r.notes.empty()) line += "  (" + r.notes + ")";
  return line;
}

}  // namespace pssc
