#include "pssc/connections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace pssc {

const char* to_string(ConnectionKind k) {
  return k == ConnectionKind::LeviCivita ? "levi_civita" : "projective_semi_symmetric";
}

OneFormPair one_forms(const Tensor& pi) {
  const int n = pi.dim();
  OneFormPair p{pi * 0.5, pi * ((n - 1.0) / (2.0 * (n + 1.0)))};
  return p;
}

PointFrame frame_at(const Chart& chart, std::span<const double> point, int order) {
  PointFrame f;
  f.metric = chart.metric_at(point, order + 1);
  f.xi = chart.xi_at(f.metric, std::min(order + 1, Chart::kMaxXiOrder));
  return f;
}

ConnectionCoeffs levi_civita_from(const MetricValue& m, int order) {
  if (order < 0 || order > 2) throw GeometryError("connection derivative order out of range");
  if (m.order < order + 1) throw GeometryError("metric evaluated with too few derivatives");
  const int n = m.G.dim();
  ConnectionCoeffs c;
  c.kind = ConnectionKind::LeviCivita;
  c.n = n;
  c.order = order;

  // Christoffel symbols of the first kind C_{lij} and their partials.
  Tensor C(n, "lll");
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) C(l, i, j) = 0.5 * (m.dG(i, j, l) + m.dG(j, i, l) - m.dG(l, i, j));
  Tensor dC, d2C, dGinv, d2Ginv;
  if (order >= 1) {
    dC = Tensor(n, "llll");
    dGinv = Tensor(n, "luu");
    for (int a = 0; a < n; ++a) {
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            dC(a, l, i, j) = 0.5 * (m.d2G(a, i, j, l) + m.d2G(a, j, i, l) - m.d2G(a, l, i, j));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) s += m.G_inv(k, p) * m.dG(a, p, q) * m.G_inv(q, l);
          dGinv(a, k, l) = -s;
        }
    }
  }
  if (order >= 2) {
    d2C = Tensor(n, "lllll");
    d2Ginv = Tensor(n, "lluu");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              d2C(a, b, l, i, j) =
                  0.5 * (m.d3G(a, b, i, j, l) + m.d3G(a, b, j, i, l) - m.d3G(a, b, l, i, j));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q)
                s += dGinv(b, k, p) * m.dG(a, p, q) * m.G_inv(q, l) +
                     m.G_inv(k, p) * m.d2G(a, b, p, q) * m.G_inv(q, l) +
                     m.G_inv(k, p) * m.dG(a, p, q) * dGinv(b, q, l);
            d2Ginv(a, b, k, l) = -s;
          }
      }
  }

  c.gamma = Tensor(n, "ull");
  if (order >= 1) c.dgamma = Tensor(n, "lull");
  if (order >= 2) c.d2gamma = Tensor(n, "llull");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double g0 = 0.0;
        for (int l = 0; l < n; ++l) g0 += m.G_inv(k, l) * C(l, i, j);
        c.gamma(k, i, j) = g0;
        for (int a = 0; a < n && order >= 1; ++a) {
          double g1 = 0.0;
          for (int l = 0; l < n; ++l) g1 += dGinv(a, k, l) * C(l, i, j) + m.G_inv(k, l) * dC(a, l, i, j);
          c.dgamma(a, k, i, j) = g1;
          for (int b = 0; b < n && order >= 2; ++b) {
            double g2 = 0.0;
            for (int l = 0; l < n; ++l)
              g2 += d2Ginv(a, b, k, l) * C(l, i, j) + dGinv(a, k, l) * dC(b, l, i, j) +
                    dGinv(b, k, l) * dC(a, l, i, j) + m.G_inv(k, l) * d2C(a, b, l, i, j);
            c.d2gamma(a, b, k, i, j) = g2;
          }
        }
      }
  return c;
}

ConnectionCoeffs projective_from(const ConnectionCoeffs& lc, const XiValue& xi) {
  if (lc.kind != ConnectionKind::LeviCivita) throw GeometryError("projective_from needs Levi-Civita coefficients");
  const int n = lc.n;
  const int order = lc.order;
  if ((order >= 1 && xi.dpi.empty()) || (order >= 2 && xi.d2pi.empty()))
    throw GeometryError("xi evaluated with too few derivatives");
  const double half = 0.5;
  const double psi_scale = (n - 1.0) / (2.0 * (n + 1.0));
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  // nabla~_X Y = nabla_X Y + psi(Y)X + psi(X)Y + phi(Y)X - phi(X)Y, so with
  // X = d_i, Y = d_j the extra term is (psi_j + phi_j) delta^k_i + (psi_i - phi_i) delta^k_j.
  auto extra = [&](double pi_i, double pi_j, int k, int i, int j) {
    double psi_i = psi_scale * pi_i, psi_j = psi_scale * pi_j;
    double phi_i = half * pi_i, phi_j = half * pi_j;
    return psi_j * delta(k, i) + psi_i * delta(k, j) + phi_j * delta(k, i) - phi_i * delta(k, j);
  };
  ConnectionCoeffs c = lc;
  c.kind = ConnectionKind::Projective;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        c.gamma(k, i, j) += extra(xi.pi(i), xi.pi(j), k, i, j);
        for (int a = 0; a < n && order >= 1; ++a) {
          c.dgamma(a, k, i, j) += extra(xi.dpi(a, i), xi.dpi(a, j), k, i, j);
          for (int b = 0; b < n && order >= 2; ++b)
            c.d2gamma(a, b, k, i, j) += extra(xi.d2pi(a, b, i), xi.d2pi(a, b, j), k, i, j);
        }
      }
  return c;
}

ConnectionCoeffs levi_civita_at(const Chart& chart, std::span<const double> point, int order) {
  return levi_civita_from(chart.metric_at(point, order + 1), order);
}

ConnectionCoeffs projective_coeffs_at(const Chart& chart, std::span<const double> point, int order) {
  PointFrame f = frame_at(chart, point, order);
  return projective_from(levi_civita_from(f.metric, order), f.xi);
}

ConnectionCoeffs connection_at(const Chart& chart, ConnectionKind kind, std::span<const double> point, int order) {
  return kind == ConnectionKind::LeviCivita ? levi_civita_at(chart, point, order)
                                            : projective_coeffs_at(chart, point, order);
}

double contract(const Tensor& covector, std::span<const double> v) {
  double s = 0.0;
  for (int i = 0; i < covector.dim(); ++i) s += covector(i) * v[static_cast<std::size_t>(i)];
  return s;
}

double inner(const Tensor& G, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (int i = 0; i < G.dim(); ++i)
    for (int j = 0; j < G.dim(); ++j) s += G(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  return s;
}

Vector torsion_at(const Tensor& pi, std::span<const double> X, std::span<const double> Y) {
  const double piX = contract(pi, X), piY = contract(pi, Y);
  Vector out(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) out[k] = piY * X[k] - piX * Y[k];
  return out;
}

Vector torsion_at(const Chart& chart, std::span<const double> point, std::span<const double> X,
                  std::span<const double> Y) {
  XiValue xi = chart.xi_at(chart.metric_at(point, 0), 0);
  return torsion_at(xi.pi, X, Y);
}

Tensor torsion_tensor(const Tensor& pi) {
  const int n = pi.dim();
  Tensor t(n, "ull");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(k, i, j) = (k == i ? pi(j) : 0.0) - (k == j ? pi(i) : 0.0);
  return t;
}

Tensor covariant_derivative(const TensorField& field, const ConnectionCoeffs& conn) {
  const Tensor& T = field.value;
  const int n = T.dim();
  const int rank = T.rank();
  if (rank > 4) throw std::invalid_argument("covariant_derivative: tensors above rank 4 are not supported");
  if (field.partial.rank() != rank + 1 || field.partial.variance() != "l" + T.variance())
    throw std::invalid_argument("covariant_derivative: partial has the wrong shape");
  if (conn.n != n) throw std::invalid_argument("covariant_derivative: dimension mismatch");
  const std::string& var = T.variance();
  Tensor out = field.partial;
  std::vector<int> src(static_cast<std::size_t>(rank));
  out.for_each_index([&](std::span<const int> idx, std::size_t flat) {
    const int a = idx[0];
    double acc = 0.0;
    for (int p = 0; p < rank; ++p) {
      std::copy(idx.begin() + 1, idx.end(), src.begin());
      const int s = idx[static_cast<std::size_t>(p) + 1];
      for (int m = 0; m < n; ++m) {
        src[static_cast<std::size_t>(p)] = m;
        if (var[static_cast<std::size_t>(p)] == 'u')
          acc += conn.gamma(s, a, m) * T.at(src);
        else
          acc -= conn.gamma(m, a, s) * T.at(src);
      }
    }
    out.data()[flat] += acc;
  });
  return out;
}

TensorField metric_field(const MetricValue& metric) {
  if (metric.order < 1) throw GeometryError("metric field needs first derivatives");
  return {metric.G, metric.dG};
}

TensorField pi_field(const XiValue& xi) {
  if (xi.dpi.empty()) throw GeometryError("pi field needs first derivatives");
  return {xi.pi, xi.dpi};
}

TensorField xi_field(const XiValue& xi) {
  if (xi.dxi.empty()) throw GeometryError("xi field needs first derivatives");
  return {xi.xi, xi.dxi};
}

NonmetricityValue nonmetricity_at(const Chart& chart, std::span<const double> point, std::span<const double> X,
                                  std::span<const double> Y, std::span<const double> Z) {
  PointFrame f = frame_at(chart, point, 0);
  const int n = chart.dim();
  ConnectionCoeffs pc = projective_from(levi_civita_from(f.metric, 0), f.xi);
  const double piX = contract(f.xi.pi, X), piY = contract(f.xi.pi, Y), piZ = contract(f.xi.pi, Z);
  NonmetricityValue v;
  v.closed_form = (2.0 * piX * inner(f.metric.G, Y, Z) - n * piY * inner(f.metric.G, X, Z) -
                   n * piZ * inner(f.metric.G, X, Y)) /
                  (n + 1.0);
  Tensor Dg = covariant_derivative(metric_field(f.metric), pc);
  double direct = 0.0;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) direct += Dg(a, j, k) * X[a] * Y[j] * Z[k];
  v.direct = direct;
  v.discrepancy = std::abs(v.closed_form - v.direct);
  return v;
}

double parallel_xi_residual(const Chart& chart, std::span<const double> point) {
  PointFrame f = frame_at(chart, point, 0);
  Tensor Dpi = covariant_derivative(pi_field(f.xi), levi_civita_from(f.metric, 0));
  return std::max(Dpi.max_abs(), f.xi.unit_residual);
}

CheckReport check_parallel_unit_xi(const Chart& chart, const SampleSet& samples, double tolerance) {
  CheckReport r;
  r.check_id = "parallel_unit_xi";
  r.manifold = chart.name();
  r.samples = static_cast<int>(samples.points.size());
  r.seed = samples.seed;
  r.tolerance = tolerance;
  r.gate_status = "not_required";
  const int n = chart.dim();
  std::vector<double> per;
  double worst_dpi = 0.0, worst_unit = 0.0;
  for (std::size_t s = 0; s < samples.points.size(); ++s) {
    PointFrame f = frame_at(chart, samples.points[s], 0);
    Tensor Dpi = covariant_derivative(pi_field(f.xi), levi_civita_from(f.metric, 0));
    double dpi = 0.0;
    for (const auto& X : samples.frames[s])
      for (const auto& Y : samples.frames[s]) {
        double v = 0.0;
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i) v += Dpi(a, i) * X[a] * Y[i];
        dpi = std::max(dpi, std::abs(v));
      }
    worst_dpi = std::max(worst_dpi, dpi);
    worst_unit = std::max(worst_unit, f.xi.unit_residual);
    per.push_back(std::max(dpi, f.xi.unit_residual));
  }
  finalize(r, per);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max|(nabla pi)(X,Y)|=%.3e max|g(xi,xi)-1|=%.3e", worst_dpi, worst_unit);
  r.notes = buf;
  return r;
}

}  // namespace pssc
