#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pssc/expr.hpp"
#include "pssc/tensor.hpp"

namespace pssc {

/// Problems with a manifold document: missing keys, dimension mismatches,
/// malformed values. Parse errors inside component expressions are rethrown
/// as SpecError with the key prepended.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pointwise failures: metric not positive definite, evaluation domain
/// errors, dimension gate.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ManifoldSpec {
  std::string name;
  int n = 0;
  std::vector<std::string> coords;
  /// g[i][j], lower indices, stored in full (mirrored from the upper triangle).
  std::vector<std::vector<Expr>> g;
  /// Components xi^i of the structure vector field.
  std::vector<Expr> xi;
  /// phi[i][j] is the component i of phi(d_j), i.e. phi^i_j.
  std::optional<std::vector<std::vector<Expr>>> phi;
  std::optional<Expr> f1, f2, f3;
  std::vector<Interval> box;
  bool parallel_xi_expected = false;
  /// Set when the document gave both g[i][j] and g[j][i] with different text;
  /// symmetry is then checked numerically at every evaluation.
  bool needs_symmetry_check = false;

  bool has_gssf_structure() const { return phi.has_value() && f1 && f2 && f3; }
};

/// Parses a manifold document (key/value text or its JSON rendering).
ManifoldSpec load_spec(std::string_view document);
ManifoldSpec load_spec_file(const std::filesystem::path& path);

/// Canonical key/value rendering; load_spec(emit_spec(s)) reproduces s.
std::string emit_spec(const ManifoldSpec& spec);

bool in_box(const ManifoldSpec& spec, std::span<const double> point);

/// Values of a scalar field and its coordinate partials up to some order.
/// d1[a], d2[a*n+b], d3[(a*n+b)*n+c].
struct ScalarJet {
  double value = 0.0;
  std::vector<double> d1, d2, d3;
};

/// Symbolic partials of one scalar expression, compiled for evaluation.
class CompiledField {
 public:
  CompiledField() = default;
  CompiledField(const Expr& e, std::span<const std::string> coords, int max_order);

  ScalarJet evaluate(std::span<const double> point, int order) const;
  int max_order() const { return max_order_; }

 private:
  int n_ = 0;
  int max_order_ = 0;
  // orders_[k]: unique programs for sorted multi-indices of length k;
  // index_[k]: full multi-index (row-major) -> slot in orders_[k].
  std::array<std::vector<Program>, 4> orders_;
  std::array<std::vector<int>, 4> index_;
};

struct MetricValue {
  Vector point;
  int order = 0;   // highest derivative order filled
  Tensor G;        // "ll"
  Tensor G_inv;    // "uu"
  Tensor dG;       // "lll"    [a][i][j] = d_a g_ij
  Tensor d2G;      // "llll"   [a][b][i][j]
  Tensor d3G;      // "lllll"  [a][b][c][i][j]
};

/// Structure field xi and the 1-form pi = g(., xi) with partials.
struct XiValue {
  Tensor xi;    // "u"
  Tensor dxi;   // "lu"  [a][i]
  Tensor d2xi;  // "llu" [a][b][i]
  Tensor pi;    // "l"
  Tensor dpi;   // "ll"  [a][i]
  Tensor d2pi;  // "lll" [a][b][i]
  double unit_residual = 0.0;  // |pi(xi) - 1|
};

struct SampleSet {
  std::uint64_t seed = 0;
  std::vector<Vector> points;
  std::vector<std::array<Vector, 4>> frames;
};

/// A ManifoldSpec with every component expression differentiated and
/// compiled. Immutable; safe to share between threads.
class Chart {
 public:
  static constexpr int kMaxMetricOrder = 3;
  static constexpr int kMaxXiOrder = 2;

  explicit Chart(ManifoldSpec spec);

  const ManifoldSpec& spec() const { return spec_; }
  int dim() const { return spec_.n; }
  const std::string& name() const { return spec_.name; }

  /// Metric with partials up to `order` (0..3). Verifies symmetry and
  /// positive definiteness.
  MetricValue metric_at(std::span<const double> point, int order = 1) const;

  /// xi, pi and their partials up to `order` (0..2). Needs the metric with at
  /// least the same order.
  XiValue xi_at(const MetricValue& metric, int order = 0) const;

  /// phi^i_j at the point; throws when the spec has no phi.
  Tensor phi_at(std::span<const double> point) const;
  /// f1, f2, f3 at the point; throws when absent.
  std::array<double, 3> f_at(std::span<const double> point) const;

 private:
  ManifoldSpec spec_;
  std::vector<CompiledField> g_;   // upper triangle, row-major i <= j
  std::vector<CompiledField> g_lower_;  // lower triangle entries when symmetry needs checking
  std::vector<CompiledField> xi_;
  std::vector<Program> phi_;
  std::vector<Program> f_;
};

/// pi_i = g_ij xi^j at the point, together with |pi(xi) - 1|.
struct PiValue {
  Vector pi;
  double unit_residual = 0.0;
};

PiValue pi_at(const Chart& chart, std::span<const double> point);

/// count points uniform in the sampling box, each with four tangent vectors
/// whose components are uniform in [-1, 1] (re-drawn when the Euclidean norm
/// is below 1e-3). Bit-for-bit reproducible for a given seed.
SampleSet sample(const ManifoldSpec& spec, int count, std::uint64_t seed);

/// Refuses theorem checks on n <= 2.
void require_dimension_above_two(const ManifoldSpec& spec, std::string_view what);

}  // namespace pssc
