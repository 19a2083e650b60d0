#include "pssc/evaluate.hpp"

#include <stdexcept>

#include "pssc/catalog.hpp"
#include "pssc/connections.hpp"
#include "pssc/curvature.hpp"

namespace pssc {

const std::vector<std::string>& tensor_ids() {
  static const std::vector<std::string> ids = {
      "gamma", "gamma_tilde", "torsion", "nonmetricity", "riemann",    "riemann_tilde",
      "ricci", "ricci_tilde", "theta",   "beta",         "projective", "projective_tilde"};
  return ids;
}

NamedTensor evaluate_tensor(const Chart& chart, std::string_view id, std::span<const double> point) {
  bool known = false;
  for (const auto& t : tensor_ids()) known = known || t == id;
  if (!known) throw std::invalid_argument("unknown tensor id '" + std::string(id) + "'");
  if (static_cast<int>(point.size()) != chart.dim())
    throw GeometryError("point has " + std::to_string(point.size()) + " coordinates, manifold has " +
                        std::to_string(chart.dim()));
  if (!in_box(chart.spec(), point)) throw GeometryError("point lies outside the sampling box");

  NamedTensor out;
  out.id = std::string(id);
  PointFrame f = frame_at(chart, point, 1);
  ConnectionCoeffs lc = levi_civita_from(f.metric, 1);
  ConnectionCoeffs pc = projective_from(lc, f.xi);
  auto curvature = [&](const ConnectionCoeffs& c) { return riemann_from(c, f.metric.G, false).R; };

  if (id == "gamma" || id == "gamma_tilde") {
    out.value = (id == "gamma" ? lc : pc).gamma;
    out.index_names = "kij";
  } else if (id == "torsion") {
    out.value = torsion_tensor(f.xi.pi);
    out.index_names = "kij";
  } else if (id == "nonmetricity") {
    out.value = covariant_derivative(metric_field(f.metric), pc);
    out.index_names = "aij";
  } else if (id == "riemann" || id == "riemann_tilde") {
    out.value = curvature(id == "riemann" ? lc : pc);
    out.index_names = "lijk";
  } else if (id == "ricci" || id == "ricci_tilde") {
    out.value = ricci_from(curvature(id == "ricci" ? lc : pc));
    out.index_names = "jk";
  } else if (id == "theta" || id == "beta") {
    ThetaBeta tb = theta_beta_from(lc, f.xi);
    out.value = id == "theta" ? tb.theta : tb.beta;
    out.index_names = "ij";
  } else {
    require_dimension_above_two(chart.spec(), "projective curvature");
    Tensor R = curvature(id == "projective" ? lc : pc);
    out.value = projective_from(R, ricci_from(R));
    out.index_names = "lijk";
  }
  return out;
}

std::string index_label(const std::string& names, std::span<const int> idx) {
  std::string s = "[";
  for (std::size_t p = 0; p < idx.size(); ++p) {
    if (p) s += ",";
    s += names[p];
    s += "=" + std::to_string(idx[p] + 1);
  }
  return s + "]";
}

ManifoldSpec resolve_manifold(const std::optional<std::string>& builtin_name, const std::optional<std::string>& file) {
  if (builtin_name.has_value() == file.has_value())
    throw std::invalid_argument("give exactly one of --manifold and --file");
  if (builtin_name) return builtin(*builtin_name).spec;
  return load_spec_file(*file);
}

}  // namespace pssc
