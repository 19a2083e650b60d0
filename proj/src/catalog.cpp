#include "pssc/catalog.hpp"

#include <charconv>
#include <sstream>

namespace pssc {

namespace {

constexpr int kDefaultEuclideanDim = 4;

std::string sphere_times_line(const std::string& name, double c, bool with_structure) {
  // Round 2-sphere of curvature c (radius 1/sqrt(c)) times a line.
  const std::string s = c == 1.0 ? "" : "/" + std::to_string(static_cast<int>(c));
  std::ostringstream d;
  d << "name = " << name << "\n"
    << "dim = 3\ncoords = theta, phi, t\n"
    << "g[0][0] = 1" << s << "\n"
    << "g[1][1] = sin(theta)^2" << s << "\n"
    << "g[2][2] = 1\n"
    << "xi[2] = 1\n";
  if (with_structure) {
    const double f = c / 4.0;
    d << "phi[0][1] = -sin(theta)\n"
      << "phi[1][0] = 1/sin(theta)\n"
      << "f1 = " << f << "\nf2 = " << f << "\nf3 = " << f << "\n";
  }
  d << "box[0] = 0.3, pi - 0.3\nbox[1] = 0.1, 6.1\nbox[2] = -1, 1\n"
    << "parallel_xi_expected = true\n";
  return d.str();
}

std::string euclidean(const std::string& name, int n) {
  std::ostringstream d;
  d << "name = " << name << "\ndim = " << n << "\ncoords = ";
  for (int i = 0; i < n; ++i) d << (i ? ", " : "") << (n == 3 ? std::string(1, "xyz"[i]) : "x" + std::to_string(i + 1));
  d << "\n";
  for (int i = 0; i < n; ++i) d << "g[" << i << "][" << i << "] = 1\n";
  d << "xi[0] = 1\n";
  for (int i = 0; i < n; ++i) d << "box[" << i << "] = -1, 1\n";
  d << "parallel_xi_expected = true\n";
  return d.str();
}

CatalogEntry make(std::string name, const std::string& document, std::vector<std::string> provenance) {
  CatalogEntry e;
  e.name = std::move(name);
  e.spec = load_spec(document);
  e.provenance = std::move(provenance);
  return e;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"euclidean3", "cylinder_s2xr", "gssf_c1",
                                                 "gssf_c4",    "sphere3_bad_xi", "euclidean_n"};
  return names;
}

CatalogEntry builtin(std::string_view name) {
  if (name == "euclidean3")
    return make("euclidean3", euclidean("euclidean3", 3),
                {"Flat R^3 with xi = d/dx.", "Parallel unit xi; R = 0, so every flat-only check applies."});
  if (name == "cylinder_s2xr")
    return make("cylinder_s2xr", sphere_times_line("cylinder_s2xr", 1.0, false),
                {"Unit round 2-sphere times a line, xi = d/dt.",
                 "Product metric: xi is parallel and unit; R is not zero (Gauss curvature 1 on the sphere factor).",
                 "theta stays 0.3 away from the poles."});
  if (name == "gssf_c1" || name == "gssf_c4") {
    const double c = name == "gssf_c1" ? 1.0 : 4.0;
    return make(std::string(name), sphere_times_line(std::string(name), c, true),
                {"Surface of constant curvature c times a line with the cosymplectic structure",
                 "phi d_theta = (1/sin theta) d_phi, phi d_phi = -sin theta d_theta, phi d_t = 0, eta = dt.",
                 "Generalized Sasakian space form with f1 = f2 = f3 = c/4, here c = " +
                     std::to_string(static_cast<int>(c)) + "."});
  }
  if (name == "sphere3_bad_xi")
    return make(
        "sphere3_bad_xi",
        "name = sphere3_bad_xi\ndim = 3\ncoords = chi, theta, phi\n"
        "g[0][0] = 1\ng[1][1] = sin(chi)^2\ng[2][2] = sin(chi)^2*sin(theta)^2\n"
        "xi[2] = 1/(sin(chi)*sin(theta))\n"
        "box[0] = 0.3, pi - 0.3\nbox[1] = 0.3, pi - 0.3\nbox[2] = 0.1, 6.1\n"
        "parallel_xi_expected = false\n",
        {"Unit round 3-sphere with xi the normalized coordinate field d/dphi.",
         "Negative control: xi is unit but not parallel, so the gate must fail.",
         "Constant curvature 1, so P = 0 still holds."});
  if (name.starts_with("euclidean_n")) {
    int n = kDefaultEuclideanDim;
    std::string full = "euclidean_n";
    if (name.size() > full.size()) {
      if (name[full.size()] != ':') throw CatalogError("unknown catalog entry '" + std::string(name) + "'");
      std::string_view digits = name.substr(full.size() + 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
      if (ec != std::errc{} || p != digits.data() + digits.size() || n < 3 || n > 16)
        throw CatalogError("euclidean_n needs a dimension between 3 and 16, got '" + std::string(digits) + "'");
      full = std::string(name);
    }
    return make(full, euclidean(full, n),
                {"Flat R^n with xi = d/dx1 (n = " + std::to_string(n) + ").",
                 "Used for the dimension dependence of lambda = -n^2/(n+1)^2."});
  }
  throw CatalogError("unknown catalog entry '" + std::string(name) + "'");
}

std::string emit_catalog_document(const CatalogEntry& entry) {
  std::string out;
  for (const auto& line : entry.provenance) out += "# " + line + "\n";
  out += emit_spec(entry.spec);
  return out;
}

std::string describe(const CatalogEntry& entry) {
  std::string d = entry.name + " (n=" + std::to_string(entry.spec.n) + ", " +
                  (entry.spec.parallel_xi_expected ? "parallel ξ" : "non-parallel ξ");
  if (entry.spec.has_gssf_structure()) d += ", almost contact structure";
  return d + ")";
}

}  // namespace pssc
