#pragma once

#include <span>
#include <vector>

#include "pssc/connections.hpp"
#include "pssc/geometry.hpp"
#include "pssc/tensor.hpp"

namespace pssc {

/// lambda = -n^2 / (n+1)^2.
constexpr double lambda_for(int n) {
  const double d = n;
  return -(d * d) / ((d + 1.0) * (d + 1.0));
}

/// R(d_i, d_j) d_k = R^l_{ijk} d_l with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
struct CurvatureValue {
  ConnectionKind kind = ConnectionKind::LeviCivita;
  Tensor R;        // "ulll"  [l][i][j][k]
  Tensor dR;       // "lulll" [a][l][i][j][k], empty unless requested
  Tensor lowered;  // "llll"  [i][j][k][l] = g_lm R^m_{ijk}
};

/// Requires conn.order >= 1, or >= 2 when with_derivative is set.
CurvatureValue riemann_from(const ConnectionCoeffs& conn, const Tensor& G, bool with_derivative);
CurvatureValue riemann_at(const Chart& chart, ConnectionKind kind, std::span<const double> point,
                          bool with_derivative = false);

/// R(X, Y) Z for a (1,3) tensor in the layout above.
Vector curvature_apply(const Tensor& R, std::span<const double> X, std::span<const double> Y,
                       std::span<const double> Z);

/// S_{jk} = R^i_{ijk} (contraction over the first slot).
Tensor ricci_from(const Tensor& R);
/// d_a S_{jk} from d_a R^l_{ijk}.
Tensor ricci_partial_from(const Tensor& dR);
double scalar_from(const Tensor& S, const Tensor& G_inv);

struct RicciValue {
  Tensor S;        // "ll"
  Tensor S_tilde;  // "ll"
  double r = 0.0;
  double r_tilde = 0.0;
  double lambda = 0.0;
  /// max |S~ - (S - lambda (n-1) pi (x) pi)| and |r~ - (r - lambda (n-1))|.
  double eq10_residual = 0.0;
  double eq11_residual = 0.0;
};

RicciValue ricci_at(const Chart& chart, std::span<const double> point);

struct ThetaBeta {
  Tensor theta;  // "ll"
  Tensor beta;   // "ll"
};

/// theta(X,Y) = (nabla_X phi)(Y) + (nabla_X psi)(Y) - psi(X)psi(Y) - phi(X)phi(Y)
///              - psi(X)phi(Y) - phi(X)psi(Y)
/// beta(X,Y)  = (nabla_X psi)(Y) - (nabla_Y psi)(X) + (nabla_X phi)(Y) - (nabla_Y phi)(X)
/// with nabla the Levi-Civita connection. lc needs order >= 0, xi first
/// derivatives.
ThetaBeta theta_beta_from(const ConnectionCoeffs& lc, const XiValue& xi);
ThetaBeta theta_beta_at(const Chart& chart, std::span<const double> point);

/// R + beta(X,Y)Z + theta(X,Z)Y - theta(Y,Z)X in component form.
Tensor curvature_from_theta_beta(const Tensor& R, const ThetaBeta& tb);

/// R(X,Y)Z + lambda { pi(X)pi(Z)Y - pi(Y)pi(Z)X } in component form.
Tensor rtilde_closed_form_tensor(const Tensor& R, const Tensor& pi);

/// Pointwise closed form; refuses points where nabla pi != 0 or
/// g(xi,xi) != 1 (residual above 1e-9).
Vector rtilde_closed_form(const Chart& chart, std::span<const double> point, std::span<const double> X,
                          std::span<const double> Y, std::span<const double> Z);

/// P(X,Y)Z = R(X,Y)Z - (1/(n-1)) { S(Y,Z)X - S(X,Z)Y }.
Tensor projective_from(const Tensor& R, const Tensor& S);
/// Weyl projective tensor of the chosen connection; n > 2 required.
Tensor projective_at(const Chart& chart, ConnectionKind kind, std::span<const double> point);

/// (R(X,Y).T)(Z,U)V = R(X,Y)(T(Z,U)V) - T(R(X,Y)Z,U)V - T(Z,R(X,Y)U)V - T(Z,U)R(X,Y)V
/// for a (1,3) tensor T.
Tensor derivation_apply(const Tensor& R, std::span<const double> X, std::span<const double> Y, const Tensor& T);
/// All basis pairs at once: result[a][b][l][i][j][k] = (R(d_a,d_b).T)^l_{ijk}.
Tensor derivation_full(const Tensor& R, const Tensor& T);
Tensor derivation_apply(const Chart& chart, ConnectionKind kind, std::span<const double> point,
                        std::span<const double> X, std::span<const double> Y, const Tensor& T);

struct QuasiEinsteinFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;            // max |S - (a g + b pi (x) pi)|
  std::vector<double> eigenvalues;  // of g^{-1} S, ascending
  double simple_eigenvalue = 0.0;   // a + b |pi|^2 (a + b for unit pi)
  bool multiplicity_ok = false;     // a with multiplicity n-1, a + b|pi|^2 simple
  bool quasi_einstein = false;      // residual small, b != 0, multiplicities ok
};

/// Least-squares (a, b) over the n(n+1)/2 independent components.
QuasiEinsteinFit quasi_einstein_fit(const Tensor& S, const Tensor& G, const Tensor& pi);

struct NullityFit {
  double k = 0.0;
  double residual = 0.0;  // max over sampled (X,Y) of |R(X,Y)xi - k[pi(Y)X - pi(X)Y]|
  int pairs = 0;
};

/// Scalar least squares for k in R(X,Y)xi = k [g(Y,xi)X - g(X,xi)Y] over the
/// frame pairs of every sample. The projective kind is gated on a parallel
/// unit xi.
NullityFit nullity_fit(const Chart& chart, ConnectionKind kind, const SampleSet& samples);

struct ConstantCurvatureFit {
  double K = 0.0;
  double residual = 0.0;  // max |R - K (g_jk delta^l_i - g_ik delta^l_j)|
};

ConstantCurvatureFit constant_curvature_fit(const Tensor& R, const Tensor& G);

/// Everything the identity checks need at one point.
struct PointAnalysis {
  Vector point;
  int n = 0;
  double lambda = 0.0;
  MetricValue metric;
  XiValue xi;
  ConnectionCoeffs lc;
  ConnectionCoeffs pc;
  CurvatureValue R;
  CurvatureValue Rt;
  Tensor S, dS;
  Tensor St, dSt;
  double r = 0.0;
  double rt = 0.0;
};

/// with_derivatives adds d R, d R~, d S, d S~ (third metric partials).
PointAnalysis analyze_point(const Chart& chart, std::span<const double> point, bool with_derivatives = true);

}  // namespace pssc
