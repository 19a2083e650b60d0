#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "pssc/geometry.hpp"
#include "pssc/report.hpp"
#include "pssc/tensor.hpp"

namespace pssc {

enum class ConnectionKind { LeviCivita, Projective };

const char* to_string(ConnectionKind k);

/// Thrown by operations that assume a parallel unit xi when the local check
/// fails.
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Connection coefficients at a point. gamma(k, i, j) is Gamma^k_{ij} with
/// nabla_{d_i} d_j = Gamma^k_{ij} d_k: i is the direction of differentiation,
/// j the argument. The order matters for the torsionful projective
/// connection.
struct ConnectionCoeffs {
  ConnectionKind kind = ConnectionKind::LeviCivita;
  int n = 0;
  int order = 0;     // number of coordinate derivatives filled
  Tensor gamma;      // "ull"    [k][i][j]
  Tensor dgamma;     // "lull"   [a][k][i][j]
  Tensor d2gamma;    // "llull"  [a][b][k][i][j]
};

/// phi = pi/2 and psi = (n-1)/(2(n+1)) pi.
struct OneFormPair {
  Tensor phi;  // "l"
  Tensor psi;  // "l"
};

OneFormPair one_forms(const Tensor& pi);

/// Metric and structure field at a point, with enough derivatives for
/// connection coefficients of the requested order.
struct PointFrame {
  MetricValue metric;
  XiValue xi;
};

/// order = number of derivatives of the connection coefficients (0..2).
PointFrame frame_at(const Chart& chart, std::span<const double> point, int order);

ConnectionCoeffs levi_civita_from(const MetricValue& metric, int order);
ConnectionCoeffs projective_from(const ConnectionCoeffs& levi_civita, const XiValue& xi);

ConnectionCoeffs levi_civita_at(const Chart& chart, std::span<const double> point, int order = 1);
ConnectionCoeffs projective_coeffs_at(const Chart& chart, std::span<const double> point, int order = 1);
ConnectionCoeffs connection_at(const Chart& chart, ConnectionKind kind, std::span<const double> point,
                               int order = 1);

/// T(X, Y) = pi(Y) X - pi(X) Y.
Vector torsion_at(const Tensor& pi, std::span<const double> X, std::span<const double> Y);
Vector torsion_at(const Chart& chart, std::span<const double> point, std::span<const double> X,
                  std::span<const double> Y);
/// Components T^k_{ij} = pi_j delta^k_i - pi_i delta^k_j.
Tensor torsion_tensor(const Tensor& pi);

struct NonmetricityValue {
  double closed_form = 0.0;
  double direct = 0.0;
  double discrepancy = 0.0;
};

/// (nabla~_X g)(Y, Z) from the closed form
/// (1/(n+1)) [2 pi(X) g(Y,Z) - n pi(Y) g(X,Z) - n pi(Z) g(X,Y)]
/// and from covariant differentiation of g with the projective coefficients.
NonmetricityValue nonmetricity_at(const Chart& chart, std::span<const double> point, std::span<const double> X,
                                  std::span<const double> Y, std::span<const double> Z);

/// Tensor field components at a point together with their first partials.
/// partial has one extra leading covector slot: partial[a][...] = d_a value[...].
struct TensorField {
  Tensor value;
  Tensor partial;
};

/// Coordinate covariant derivative. The result has the derivative direction
/// as its first (covector) slot, followed by the slots of the field. Fields of
/// total rank above 4 are rejected.
Tensor covariant_derivative(const TensorField& field, const ConnectionCoeffs& conn);

TensorField metric_field(const MetricValue& metric);
TensorField pi_field(const XiValue& xi);
TensorField xi_field(const XiValue& xi);

/// Checks nabla pi = 0 (over pairs of sampled frame vectors) and
/// g(xi, xi) = 1 at every sample point.
CheckReport check_parallel_unit_xi(const Chart& chart, const SampleSet& samples, double tolerance = 1e-9);

/// Local version for pointwise operations that assume a parallel unit xi: max |d-component of nabla pi| and |g(xi,xi) - 1| at the point.
double parallel_xi_residual(const Chart& chart, std::span<const double> point);

// Small contraction helpers shared by the curvature and theorem code.
double contract(const Tensor& covector, std::span<const double> v);
double inner(const Tensor& G, std::span<const double> a, std::span<const double> b);

}  // namespace pssc
