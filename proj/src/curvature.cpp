#include "pssc/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pssc {

namespace {

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

CurvatureValue riemann_from(const ConnectionCoeffs& c, const Tensor& G, bool with_derivative) {
  const int n = c.n;
  if (c.order < 1 || (with_derivative && c.order < 2))
    throw GeometryError("curvature needs connection coefficients with more derivatives");
  CurvatureValue out;
  out.kind = c.kind;
  out.R = Tensor(n, "ulll");
  const Tensor& Gm = c.gamma;
  const Tensor& dGm = c.dgamma;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dGm(i, l, j, k) - dGm(j, l, i, k);
          for (int m = 0; m < n; ++m) v += Gm(l, i, m) * Gm(m, j, k) - Gm(l, j, m) * Gm(m, i, k);
          out.R(l, i, j, k) = v;
        }
  if (with_derivative) {
    const Tensor& d2Gm = c.d2gamma;
    out.dR = Tensor(n, "lulll");
    for (int a = 0; a < n; ++a)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              double v = d2Gm(a, i, l, j, k) - d2Gm(a, j, l, i, k);
              for (int m = 0; m < n; ++m)
                v += dGm(a, l, i, m) * Gm(m, j, k) + Gm(l, i, m) * dGm(a, m, j, k) - dGm(a, l, j, m) * Gm(m, i, k) -
                     Gm(l, j, m) * dGm(a, m, i, k);
              out.dR(a, l, i, j, k) = v;
            }
  }
  out.lowered = Tensor(n, "llll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += G(l, m) * out.R(m, i, j, k);
          out.lowered(i, j, k, l) = v;
        }
  return out;
}

CurvatureValue riemann_at(const Chart& chart, ConnectionKind kind, std::span<const double> point,
                          bool with_derivative) {
  const int order = with_derivative ? 2 : 1;
  PointFrame f = frame_at(chart, point, order);
  ConnectionCoeffs c = levi_civita_from(f.metric, order);
  if (kind == ConnectionKind::Projective) c = projective_from(c, f.xi);
  return riemann_from(c, f.metric.G, with_derivative);
}

Vector curvature_apply(const Tensor& R, std::span<const double> X, std::span<const double> Y,
                       std::span<const double> Z) {
  const int n = R.dim();
  Vector out(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v += R(l, i, j, k) * X[i] * Y[j] * Z[k];
    out[static_cast<std::size_t>(l)] = v;
  }
  return out;
}

Tensor ricci_from(const Tensor& R) {
  const int n = R.dim();
  Tensor S(n, "ll");
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += R(i, i, j, k);
      S(j, k) = v;
    }
  return S;
}

Tensor ricci_partial_from(const Tensor& dR) {
  const int n = dR.dim();
  Tensor dS(n, "lll");
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += dR(a, i, i, j, k);
        dS(a, j, k) = v;
      }
  return dS;
}

double scalar_from(const Tensor& S, const Tensor& G_inv) {
  double r = 0.0;
  for (int i = 0; i < S.dim(); ++i)
    for (int j = 0; j < S.dim(); ++j) r += G_inv(i, j) * S(i, j);
  return r;
}

RicciValue ricci_at(const Chart& chart, std::span<const double> point) {
  PointAnalysis p = analyze_point(chart, point, false);
  RicciValue v;
  v.S = p.S;
  v.S_tilde = p.St;
  v.r = p.r;
  v.r_tilde = p.rt;
  v.lambda = p.lambda;
  const int n = p.n;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double expected = p.S(j, k) - p.lambda * (n - 1) * p.xi.pi(j) * p.xi.pi(k);
      v.eq10_residual = std::max(v.eq10_residual, std::abs(p.St(j, k) - expected));
    }
  v.eq11_residual = std::abs(p.rt - (p.r - p.lambda * (n - 1)));
  return v;
}

ThetaBeta theta_beta_from(const ConnectionCoeffs& lc, const XiValue& xi) {
  const int n = lc.n;
  OneFormPair forms = one_forms(xi.pi);
  OneFormPair dforms = one_forms(xi.dpi);  // partials scale the same way
  Tensor Dphi = covariant_derivative({forms.phi, dforms.phi}, lc);
  Tensor Dpsi = covariant_derivative({forms.psi, dforms.psi}, lc);
  ThetaBeta tb{Tensor(n, "ll"), Tensor(n, "ll")};
  const Tensor& phi = forms.phi;
  const Tensor& psi = forms.psi;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      tb.theta(i, j) = Dphi(i, j) + Dpsi(i, j) - psi(i) * psi(j) - phi(i) * phi(j) - psi(i) * phi(j) -
                       phi(i) * psi(j);
      tb.beta(i, j) = Dpsi(i, j) - Dpsi(j, i) + Dphi(i, j) - Dphi(j, i);
    }
  return tb;
}

ThetaBeta theta_beta_at(const Chart& chart, std::span<const double> point) {
  PointFrame f = frame_at(chart, point, 0);
  return theta_beta_from(levi_civita_from(f.metric, 0), f.xi);
}

Tensor curvature_from_theta_beta(const Tensor& R, const ThetaBeta& tb) {
  const int n = R.dim();
  Tensor out = R;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out(l, i, j, k) += tb.beta(i, j) * delta(l, k) + tb.theta(i, k) * delta(l, j) - tb.theta(j, k) * delta(l, i);
  return out;
}

Tensor rtilde_closed_form_tensor(const Tensor& R, const Tensor& pi) {
  const int n = R.dim();
  const double lambda = lambda_for(n);
  Tensor out = R;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out(l, i, j, k) += lambda * (pi(i) * pi(k) * delta(l, j) - pi(j) * pi(k) * delta(l, i));
  return out;
}

Vector rtilde_closed_form(const Chart& chart, std::span<const double> point, std::span<const double> X,
                          std::span<const double> Y, std::span<const double> Z) {
  double gate = parallel_xi_residual(chart, point);
  if (gate > 1e-9) throw GateError("closed form for R~ needs a parallel unit xi (residual " + std::to_string(gate) + ")");
  PointFrame f = frame_at(chart, point, 1);
  CurvatureValue R = riemann_from(levi_civita_from(f.metric, 1), f.metric.G, false);
  return curvature_apply(rtilde_closed_form_tensor(R.R, f.xi.pi), X, Y, Z);
}

Tensor projective_from(const Tensor& R, const Tensor& S) {
  const int n = R.dim();
  if (n <= 2) throw GeometryError("projective curvature requires n > 2");
  const double c = 1.0 / (n - 1.0);
  Tensor P = R;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) P(l, i, j, k) -= c * (S(j, k) * delta(l, i) - S(i, k) * delta(l, j));
  return P;
}

Tensor projective_at(const Chart& chart, ConnectionKind kind, std::span<const double> point) {
  require_dimension_above_two(chart.spec(), "projective curvature");
  CurvatureValue c = riemann_at(chart, kind, point, false);
  return projective_from(c.R, ricci_from(c.R));
}

namespace {

// (E . T) for the endomorphism E^l_m acting as a derivation on a (1,3) tensor.
void derivation_into(const Tensor& E, const Tensor& T, Tensor& out, std::size_t base) {
  const int n = T.dim();
  auto data = out.data();
  std::size_t flat = base;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++flat) {
          double v = 0.0;
          for (int m = 0; m < n; ++m)
            v += E(l, m) * T(m, i, j, k) - E(m, i) * T(l, m, j, k) - E(m, j) * T(l, i, m, k) - E(m, k) * T(l, i, j, m);
          data[flat] = v;
        }
}

Tensor endomorphism(const Tensor& R, std::span<const double> X, std::span<const double> Y) {
  const int n = R.dim();
  Tensor E(n, "ul");
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v += R(l, i, j, m) * X[i] * Y[j];
      E(l, m) = v;
    }
  return E;
}

}  // namespace

Tensor derivation_apply(const Tensor& R, std::span<const double> X, std::span<const double> Y, const Tensor& T) {
  if (T.variance() != "ulll") throw std::invalid_argument("derivation_apply expects a (1,3) tensor");
  Tensor out(T.dim(), "ulll");
  derivation_into(endomorphism(R, X, Y), T, out, 0);
  return out;
}

Tensor derivation_full(const Tensor& R, const Tensor& T) {
  if (T.variance() != "ulll") throw std::invalid_argument("derivation_full expects a (1,3) tensor");
  const int n = T.dim();
  Tensor out(n, "llulll");
  const std::size_t block = T.size();
  Tensor E(n, "ul");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) E(l, m) = R(l, a, b, m);
      derivation_into(E, T, out, static_cast<std::size_t>(a * n + b) * block);
    }
  return out;
}

Tensor derivation_apply(const Chart& chart, ConnectionKind kind, std::span<const double> point,
                        std::span<const double> X, std::span<const double> Y, const Tensor& T) {
  CurvatureValue c = riemann_at(chart, kind, point, false);
  return derivation_apply(c.R, X, Y, T);
}

QuasiEinsteinFit quasi_einstein_fit(const Tensor& S, const Tensor& G, const Tensor& pi) {
  const int n = S.dim();
  if (pi.max_abs() == 0.0) throw std::invalid_argument("quasi_einstein_fit: pi is zero");
  const int rows = n * (n + 1) / 2;
  Eigen::MatrixXd A(rows, 2);
  Eigen::VectorXd rhs(rows);
  int r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++r) {
      A(r, 0) = G(i, j);
      A(r, 1) = pi(i) * pi(j);
      rhs(r) = 0.5 * (S(i, j) + S(j, i));
    }
  Eigen::Vector2d ab = A.colPivHouseholderQr().solve(rhs);
  QuasiEinsteinFit fit;
  fit.a = ab(0);
  fit.b = ab(1);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      fit.residual = std::max(fit.residual, std::abs(S(i, j) - fit.a * G(i, j) - fit.b * pi(i) * pi(j)));
      scale = std::max(scale, std::abs(S(i, j)));
    }

  Eigen::MatrixXd Sm(n, n), Gm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Sm(i, j) = 0.5 * (S(i, j) + S(j, i));
      Gm(i, j) = G(i, j);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Sm, Gm);
  if (es.info() != Eigen::Success) throw GeometryError("quasi_einstein_fit: eigen decomposition failed");
  for (int i = 0; i < n; ++i) fit.eigenvalues.push_back(es.eigenvalues()(i));

  double pi_norm2 = pi.size() ? Eigen::VectorXd::Map(pi.data().data(), n).dot(
                                    Gm.ldlt().solve(Eigen::VectorXd::Map(pi.data().data(), n)))
                              : 0.0;
  fit.simple_eigenvalue = fit.a + fit.b * pi_norm2;
  const double tol = 1e-8 * (1.0 + std::abs(fit.a) + std::abs(fit.b) * pi_norm2);
  int count_a = 0, count_simple = 0;
  for (double mu : fit.eigenvalues) {
    bool near_a = std::abs(mu - fit.a) <= tol;
    bool near_s = std::abs(mu - fit.simple_eigenvalue) <= tol;
    if (near_a && !near_s) ++count_a;
    else if (near_s && !near_a) ++count_simple;
  }
  fit.multiplicity_ok = count_a == n - 1 && count_simple == 1;
  fit.quasi_einstein = fit.multiplicity_ok && std::abs(fit.b) * pi_norm2 > tol &&
                       fit.residual <= 1e-8 * (1.0 + scale);
  return fit;
}

NullityFit nullity_fit(const Chart& chart, ConnectionKind kind, const SampleSet& samples) {
  if (kind == ConnectionKind::Projective) {
    CheckReport gate = check_parallel_unit_xi(chart, samples);
    if (!gate.pass) throw GateError("nullity fit for the projective connection needs a parallel unit xi (" + gate.notes + ")");
  }
  const int n = chart.dim();
  struct Pair {
    Vector A, B;
  };
  std::vector<Pair> pairs;
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < samples.points.size(); ++s) {
    PointFrame f = frame_at(chart, samples.points[s], 1);
    ConnectionCoeffs c = levi_civita_from(f.metric, 1);
    if (kind == ConnectionKind::Projective) c = projective_from(c, f.xi);
    CurvatureValue R = riemann_from(c, f.metric.G, false);
    const auto& fr = samples.frames[s];
    for (std::size_t p = 0; p < fr.size(); ++p)
      for (std::size_t q = p + 1; q < fr.size(); ++q) {
        Pair pr;
        pr.A = curvature_apply(R.R, fr[p], fr[q], f.xi.xi.data());
        pr.B = torsion_at(f.xi.pi, fr[p], fr[q]);
        num += inner(f.metric.G, pr.A, pr.B);
        den += inner(f.metric.G, pr.B, pr.B);
        pairs.push_back(std::move(pr));
      }
  }
  NullityFit fit;
  fit.pairs = static_cast<int>(pairs.size());
  fit.k = den > 0.0 ? num / den : 0.0;
  for (const auto& pr : pairs)
    for (int l = 0; l < n; ++l) fit.residual = std::max(fit.residual, std::abs(pr.A[l] - fit.k * pr.B[l]));
  return fit;
}

ConstantCurvatureFit constant_curvature_fit(const Tensor& R, const Tensor& G) {
  const int n = R.dim();
  Tensor B(n, "ulll");
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) B(l, i, j, k) = G(j, k) * delta(l, i) - G(i, k) * delta(l, j);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < R.size(); ++t) {
    num += R.data()[t] * B.data()[t];
    den += B.data()[t] * B.data()[t];
  }
  ConstantCurvatureFit fit;
  fit.K = den > 0.0 ? num / den : 0.0;
  fit.residual = max_abs_diff(R, B * fit.K);
  return fit;
}

PointAnalysis analyze_point(const Chart& chart, std::span<const double> point, bool with_derivatives) {
  const int order = with_derivatives ? 2 : 1;
  PointAnalysis p;
  p.point.assign(point.begin(), point.end());
  p.n = chart.dim();
  p.lambda = lambda_for(p.n);
  PointFrame f = frame_at(chart, point, order);
  p.metric = std::move(f.metric);
  p.xi = std::move(f.xi);
  p.lc = levi_civita_from(p.metric, order);
  p.pc = projective_from(p.lc, p.xi);
  p.R = riemann_from(p.lc, p.metric.G, with_derivatives);
  p.Rt = riemann_from(p.pc, p.metric.G, with_derivatives);
  p.S = ricci_from(p.R.R);
  p.St = ricci_from(p.Rt.R);
  if (with_derivatives) {
    p.dS = ricci_partial_from(p.R.dR);
    p.dSt = ricci_partial_from(p.Rt.dR);
  }
  p.r = scalar_from(p.S, p.metric.G_inv);
  p.rt = scalar_from(p.St, p.metric.G_inv);
  return p;
}

}  // namespace pssc
