#include "pssc/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pssc {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

struct Key {
  std::string base;
  std::vector<int> idx;
};

Key split_key(const std::string& key) {
  Key k;
  std::size_t br = key.find('[');
  k.base = key.substr(0, br);
  while (br != std::string::npos) {
    std::size_t close = key.find(']', br);
    if (close == std::string::npos) throw SpecError("malformed key '" + key + "'");
    std::string num = key.substr(br + 1, close - br - 1);
    int v = -1;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || p != num.data() + num.size() || v < 0)
      throw SpecError("malformed index in key '" + key + "'");
    k.idx.push_back(v);
    br = close + 1 < key.size() ? close + 1 : std::string::npos;
    if (br != std::string::npos && key[br] != '[') throw SpecError("malformed key '" + key + "'");
  }
  return k;
}

Expr parse_component(const std::string& key, const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw SpecError(key + ": " + e.what());
  }
}

double parse_bound(const std::string& key, const std::string& text) {
  Expr e = parse_component(key, text);
  try {
    return eval(e, {{"pi", std::numbers::pi}});
  } catch (const EvalError& err) {
    throw SpecError(key + ": " + err.what());
  }
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues read_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw SpecError("line " + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

KeyValues json_key_values(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid JSON manifold document: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("JSON manifold document must be an object");
  auto scalar = [](const std::string& key, const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw SpecError("unsupported JSON value for key '" + key + "'");
  };
  KeyValues out;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) joined += ",";
        joined += scalar(key, value[i]);
      }
      out.emplace_back(key, joined);
    } else {
      out.emplace_back(key, scalar(key, value));
    }
  }
  return out;
}

ManifoldSpec build_spec(const KeyValues& kv) {
  std::map<std::string, std::string> seen;
  for (const auto& [k, v] : kv) {
    if (!seen.emplace(k, v).second) throw SpecError("duplicate key '" + k + "'");
  }

  ManifoldSpec spec;
  auto require = [&](const std::string& k) -> const std::string& {
    auto it = seen.find(k);
    if (it == seen.end()) throw SpecError("missing required key '" + k + "'");
    return it->second;
  };

  {
    const std::string& d = require("dim");
    auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), spec.n);
    if (ec != std::errc{} || p != d.data() + d.size()) throw SpecError("dim must be an integer");
    if (spec.n < 2) throw SpecError("dim must be at least 2");
  }
  spec.coords = split_commas(require("coords"));
  if (static_cast<int>(spec.coords.size()) != spec.n)
    throw SpecError("dimension mismatch: dim = " + std::to_string(spec.n) + " but " +
                    std::to_string(spec.coords.size()) + " coordinates");
  {
    std::set<std::string> unique;
    for (const auto& c : spec.coords) {
      if (!is_identifier(c)) throw SpecError("invalid coordinate name '" + c + "'");
      for (std::string_view fn : {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "pi"})
        if (c == fn) throw SpecError("coordinate name '" + c + "' is reserved");
      if (!unique.insert(c).second) throw SpecError("duplicate coordinate '" + c + "'");
    }
  }
  if (auto it = seen.find("name"); it != seen.end()) spec.name = it->second;

  const int n = spec.n;
  std::vector<std::vector<std::optional<Expr>>> g(n, std::vector<std::optional<Expr>>(n));
  std::vector<std::vector<std::string>> g_text(n, std::vector<std::string>(n));
  std::vector<std::optional<Expr>> xi(n);
  std::vector<std::vector<std::optional<Expr>>> phi(n, std::vector<std::optional<Expr>>(n));
  bool any_phi = false, any_xi = false;
  std::vector<std::optional<Interval>> box(n);
  int g_extent = 0;

  auto check_index = [&](const std::string& key, const Key& k, std::size_t count, const char* what) {
    if (k.idx.size() != count) throw SpecError("key '" + key + "' needs " + std::to_string(count) + " index(es)");
    for (int i : k.idx)
      if (i >= n)
        throw SpecError(std::string("dimension mismatch: ") + what + " index " + std::to_string(i) +
                        " out of range for dim " + std::to_string(n));
  };

  for (const auto& [key, value] : kv) {
    Key k = split_key(key);
    if (k.base == "dim" || k.base == "coords" || k.base == "name") {
      if (!k.idx.empty()) throw SpecError("unexpected index on '" + key + "'");
      continue;
    }
    if (k.base == "g") {
      if (k.idx.size() == 2) g_extent = std::max({g_extent, k.idx[0] + 1, k.idx[1] + 1});
      check_index(key, k, 2, "metric");
      g[k.idx[0]][k.idx[1]] = parse_component(key, value);
      g_text[k.idx[0]][k.idx[1]] = value;
    } else if (k.base == "xi") {
      check_index(key, k, 1, "xi");
      xi[k.idx[0]] = parse_component(key, value);
      any_xi = true;
    } else if (k.base == "phi") {
      check_index(key, k, 2, "phi");
      phi[k.idx[0]][k.idx[1]] = parse_component(key, value);
      any_phi = true;
    } else if (k.base == "f1" || k.base == "f2" || k.base == "f3") {
      if (!k.idx.empty()) throw SpecError("unexpected index on '" + key + "'");
      Expr e = parse_component(key, value);
      (k.base == "f1" ? spec.f1 : k.base == "f2" ? spec.f2 : spec.f3) = e;
    } else if (k.base == "box") {
      check_index(key, k, 1, "box");
      auto parts = split_commas(value);
      if (parts.size() != 2) throw SpecError(key + ": expected 'lo, hi'");
      Interval iv{parse_bound(key, parts[0]), parse_bound(key, parts[1])};
      if (!(iv.lo < iv.hi)) throw SpecError(key + ": empty sampling interval");
      box[k.idx[0]] = iv;
    } else if (k.base == "parallel_xi_expected") {
      if (value == "true") spec.parallel_xi_expected = true;
      else if (value == "false") spec.parallel_xi_expected = false;
      else throw SpecError("parallel_xi_expected must be true or false");
    } else {
      throw SpecError("unknown key '" + key + "'");
    }
  }

  if (g_extent != n)
    throw SpecError("dimension mismatch: metric is " + std::to_string(g_extent) + "x" +
                    std::to_string(g_extent) + " but dim is " + std::to_string(n));
  if (!any_xi) throw SpecError("missing required key 'xi[i]'");

  spec.g.assign(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i) {
    if (!g[i][i]) throw SpecError("missing required key 'g[" + std::to_string(i) + "][" + std::to_string(i) + "]'");
    for (int j = i; j < n; ++j) {
      const auto& up = g[i][j];
      const auto& lo = g[j][i];
      Expr value = up ? *up : lo ? *lo : Expr::constant(0.0);
      spec.g[i][j] = value;
      spec.g[j][i] = value;
      if (i != j && up && lo && g_text[i][j] != g_text[j][i]) {
        spec.needs_symmetry_check = true;
        spec.g[j][i] = *lo;
      }
    }
  }
  spec.xi.assign(n, Expr::constant(0.0));
  for (int i = 0; i < n; ++i)
    if (xi[i]) spec.xi[i] = *xi[i];
  if (any_phi) {
    std::vector<std::vector<Expr>> p(n, std::vector<Expr>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (phi[i][j]) p[i][j] = *phi[i][j];
    spec.phi = std::move(p);
  }
  spec.box.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!box[i]) throw SpecError("missing required key 'box[" + std::to_string(i) + "]'");
    spec.box[i] = *box[i];
  }

  // Every variable must be a coordinate.
  std::set<std::string> coords(spec.coords.begin(), spec.coords.end());
  auto check_vars = [&](const Expr& e, const std::string& where) {
    for (const auto& v : variables(e))
      if (!coords.count(v)) throw SpecError(where + ": '" + v + "' is not a coordinate");
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      check_vars(spec.g[i][j], "g");
      if (spec.phi) check_vars((*spec.phi)[i][j], "phi");
    }
    check_vars(spec.xi[i], "xi");
  }
  for (const auto* f : {&spec.f1, &spec.f2, &spec.f3})
    if (*f) check_vars(**f, "f");
  return spec;
}

}  // namespace

ManifoldSpec load_spec(std::string_view document) {
  std::size_t first = document.find_first_not_of(" \t\r\n");
  bool json = first != std::string_view::npos && document[first] == '{';
  return build_spec(json ? json_key_values(document) : read_key_values(document));
}

ManifoldSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open manifold file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ManifoldSpec spec = load_spec(buf.str());
  if (spec.name.empty()) spec.name = path.stem().string();
  return spec;
}

std::string emit_spec(const ManifoldSpec& spec) {
  std::ostringstream out;
  const int n = spec.n;
  if (!spec.name.empty()) out << "name = " << spec.name << "\n";
  out << "dim = " << n << "\n";
  out << "coords = ";
  for (int i = 0; i < n; ++i) out << (i ? ", " : "") << spec.coords[i];
  out << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (i == j || !spec.g[i][j].is_constant(0.0))
        out << "g[" << i << "][" << j << "] = " << print(spec.g[i][j]) << "\n";
  if (spec.needs_symmetry_check)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) out << "g[" << i << "][" << j << "] = " << print(spec.g[i][j]) << "\n";
  bool any_xi = false;
  for (int i = 0; i < n; ++i) {
    if (!spec.xi[i].is_constant(0.0)) {
      out << "xi[" << i << "] = " << print(spec.xi[i]) << "\n";
      any_xi = true;
    }
  }
  if (!any_xi) out << "xi[0] = 0\n";
  if (spec.phi) {
    bool any = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(*spec.phi)[i][j].is_constant(0.0)) {
          out << "phi[" << i << "][" << j << "] = " << print((*spec.phi)[i][j]) << "\n";
          any = true;
        }
    if (!any) out << "phi[0][0] = 0\n";
  }
  if (spec.f1) out << "f1 = " << print(*spec.f1) << "\n";
  if (spec.f2) out << "f2 = " << print(*spec.f2) << "\n";
  if (spec.f3) out << "f3 = " << print(*spec.f3) << "\n";
  for (int i = 0; i < n; ++i)
    out << "box[" << i << "] = " << format_double(spec.box[i].lo) << ", " << format_double(spec.box[i].hi) << "\n";
  out << "parallel_xi_expected = " << (spec.parallel_xi_expected ? "true" : "false") << "\n";
  return out.str();
}

bool in_box(const ManifoldSpec& spec, std::span<const double> point) {
  if (static_cast<int>(point.size()) != spec.n) return false;
  for (int i = 0; i < spec.n; ++i)
    if (!(point[i] >= spec.box[i].lo && point[i] <= spec.box[i].hi)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// CompiledField

CompiledField::CompiledField(const Expr& e, std::span<const std::string> coords, int max_order)
    : n_(static_cast<int>(coords.size())), max_order_(max_order) {
  std::vector<Expr> level{e};
  std::vector<std::vector<int>> keys{{}};
  orders_[0].emplace_back(e, coords);
  index_[0] = {0};
  for (int k = 1; k <= max_order; ++k) {
    std::map<std::vector<int>, int> slot;
    std::vector<Expr> next;
    std::vector<std::vector<int>> next_keys;
    std::map<std::vector<int>, int> prev_slot;
    for (std::size_t s = 0; s < keys.size(); ++s) prev_slot[keys[s]] = static_cast<int>(s);
    // Sorted multi-indices of length k, built from sorted prefixes.
    for (std::size_t s = 0; s < keys.size(); ++s) {
      int start = keys[s].empty() ? 0 : keys[s].back();
      for (int a = start; a < n_; ++a) {
        std::vector<int> key = keys[s];
        key.push_back(a);
        slot[key] = static_cast<int>(next.size());
        next.push_back(diff(level[s], coords[a]));
        next_keys.push_back(std::move(key));
      }
    }
    for (const auto& d : next) orders_[k].emplace_back(d, coords);
    std::size_t total = 1;
    for (int r = 0; r < k; ++r) total *= static_cast<std::size_t>(n_);
    index_[k].resize(total);
    std::vector<int> idx(k, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::vector<int> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      index_[k][flat] = slot.at(sorted);
      for (int p = k - 1; p >= 0; --p) {
        if (++idx[p] < n_) break;
        idx[p] = 0;
      }
    }
    level = std::move(next);
    keys = std::move(next_keys);
  }
}

ScalarJet CompiledField::evaluate(std::span<const double> point, int order) const {
  if (order > max_order_) throw GeometryError("derivative order not compiled");
  ScalarJet jet;
  jet.value = orders_[0][0](point);
  std::array<std::vector<double>*, 4> outs{nullptr, &jet.d1, &jet.d2, &jet.d3};
  for (int k = 1; k <= order; ++k) {
    std::vector<double> unique(orders_[k].size());
    for (std::size_t s = 0; s < unique.size(); ++s) unique[s] = orders_[k][s](point);
    auto& out = *outs[k];
    out.resize(index_[k].size());
    for (std::size_t f = 0; f < out.size(); ++f) out[f] = unique[static_cast<std::size_t>(index_[k][f])];
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(ManifoldSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g_.emplace_back(spec_.g[i][j], spec_.coords, kMaxMetricOrder);
  if (spec_.needs_symmetry_check)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) g_lower_.emplace_back(spec_.g[i][j], spec_.coords, 0);
  for (int i = 0; i < n; ++i) xi_.emplace_back(spec_.xi[i], spec_.coords, kMaxXiOrder);
  if (spec_.phi)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) phi_.emplace_back((*spec_.phi)[i][j], spec_.coords);
  if (spec_.f1 && spec_.f2 && spec_.f3)
    for (const auto* f : {&spec_.f1, &spec_.f2, &spec_.f3}) f_.emplace_back(**f, spec_.coords);
}

MetricValue Chart::metric_at(std::span<const double> point, int order) const {
  const int n = spec_.n;
  if (static_cast<int>(point.size()) != n)
    throw GeometryError("point has " + std::to_string(point.size()) + " coordinates, expected " + std::to_string(n));
  if (order < 0 || order > kMaxMetricOrder) throw GeometryError("metric derivative order out of range");
  MetricValue m;
  m.point.assign(point.begin(), point.end());
  m.order = order;
  m.G = Tensor(n, "ll");
  if (order >= 1) m.dG = Tensor(n, "lll");
  if (order >= 2) m.d2G = Tensor(n, "llll");
  if (order >= 3) m.d3G = Tensor(n, "lllll");
  try {
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j, ++p) {
        ScalarJet jet = g_[p].evaluate(point, order);
        m.G(i, j) = m.G(j, i) = jet.value;
        for (int a = 0; a < n && order >= 1; ++a) {
          m.dG(a, i, j) = m.dG(a, j, i) = jet.d1[a];
          for (int b = 0; b < n && order >= 2; ++b) {
            m.d2G(a, b, i, j) = m.d2G(a, b, j, i) = jet.d2[a * n + b];
            for (int c = 0; c < n && order >= 3; ++c)
              m.d3G(a, b, c, i, j) = m.d3G(a, b, c, j, i) = jet.d3[(a * n + b) * n + c];
          }
        }
      }
    }
    if (spec_.needs_symmetry_check) {
      std::size_t q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j, ++q) {
          double lower = g_lower_[q].evaluate(point, 0).value;
          if (std::abs(lower - m.G(j, i)) > 1e-12 * (1.0 + std::abs(lower)))
            throw GeometryError("metric not symmetric at point: g[" + std::to_string(i) + "][" +
                                std::to_string(j) + "] != g[" + std::to_string(j) + "][" + std::to_string(i) + "]");
        }
    }
  } catch (const EvalError& e) {
    throw GeometryError(std::string("metric evaluation failed: ") + e.what());
  }

  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = m.G(i, j);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0.0).any())
    throw GeometryError("metric is not positive definite at point");
  Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
  m.G_inv = Tensor(n, "uu");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.G_inv(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  return m;
}

XiValue Chart::xi_at(const MetricValue& metric, int order) const {
  const int n = spec_.n;
  if (order < 0 || order > kMaxXiOrder) throw GeometryError("xi derivative order out of range");
  if (metric.order < order) throw GeometryError("metric evaluated with too few derivatives");
  XiValue x;
  x.xi = Tensor(n, "u");
  x.pi = Tensor(n, "l");
  if (order >= 1) {
    x.dxi = Tensor(n, "lu");
    x.dpi = Tensor(n, "ll");
  }
  if (order >= 2) {
    x.d2xi = Tensor(n, "llu");
    x.d2pi = Tensor(n, "lll");
  }
  try {
    for (int i = 0; i < n; ++i) {
      ScalarJet jet = xi_[i].evaluate(metric.point, order);
      x.xi(i) = jet.value;
      for (int a = 0; a < n && order >= 1; ++a) {
        x.dxi(a, i) = jet.d1[a];
        for (int b = 0; b < n && order >= 2; ++b) x.d2xi(a, b, i) = jet.d2[a * n + b];
      }
    }
  } catch (const EvalError& e) {
    throw GeometryError(std::string("xi evaluation failed: ") + e.what());
  }
  // pi_i = g_ij xi^j and its Leibniz expansions.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x.pi(i) += metric.G(i, j) * x.xi(j);
      for (int a = 0; a < n && order >= 1; ++a) {
        x.dpi(a, i) += metric.dG(a, i, j) * x.xi(j) + metric.G(i, j) * x.dxi(a, j);
        for (int b = 0; b < n && order >= 2; ++b)
          x.d2pi(a, b, i) += metric.d2G(a, b, i, j) * x.xi(j) + metric.dG(a, i, j) * x.dxi(b, j) +
                             metric.dG(b, i, j) * x.dxi(a, j) + metric.G(i, j) * x.d2xi(a, b, j);
      }
    }
  }
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm += x.pi(i) * x.xi(i);
  x.unit_residual = std::abs(norm - 1.0);
  return x;
}

Tensor Chart::phi_at(std::span<const double> point) const {
  if (!spec_.phi) throw GeometryError("manifold '" + spec_.name + "' has no phi tensor");
  const int n = spec_.n;
  Tensor t(n, "ul");
  try {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = phi_[static_cast<std::size_t>(i * n + j)](point);
  } catch (const EvalError& e) {
    throw GeometryError(std::string("phi evaluation failed: ") + e.what());
  }
  return t;
}

std::array<double, 3> Chart::f_at(std::span<const double> point) const {
  if (f_.size() != 3) throw GeometryError("manifold '" + spec_.name + "' has no f1, f2, f3");
  try {
    return {f_[0](point), f_[1](point), f_[2](point)};
  } catch (const EvalError& e) {
    throw GeometryError(std::string("f evaluation failed: ") + e.what());
  }
}

PiValue pi_at(const Chart& chart, std::span<const double> point) {
  XiValue x = chart.xi_at(chart.metric_at(point, 0), 0);
  PiValue out;
  out.pi.assign(x.pi.data().begin(), x.pi.data().end());
  out.unit_residual = x.unit_residual;
  return out;
}

namespace {

// 53 random bits -> [0, 1). Independent of the standard library's
// distribution implementations so samples are identical across toolchains.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SampleSet sample(const ManifoldSpec& spec, int count, std::uint64_t seed) {
  if (count < 1) throw GeometryError("sample count must be at least 1");
  for (const auto& iv : spec.box)
    if (!(iv.lo < iv.hi)) throw GeometryError("empty sampling box");
  if (static_cast<int>(spec.box.size()) != spec.n) throw GeometryError("sampling box has wrong dimension");
  std::mt19937_64 rng(seed);
  SampleSet s;
  s.seed = seed;
  s.points.reserve(static_cast<std::size_t>(count));
  s.frames.reserve(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) {
    Vector x(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i)
      x[i] = spec.box[i].lo + (spec.box[i].hi - spec.box[i].lo) * unit_double(rng);
    std::array<Vector, 4> frame;
    for (auto& v : frame) {
      v.assign(static_cast<std::size_t>(spec.n), 0.0);
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& c : v) {
          c = 2.0 * unit_double(rng) - 1.0;
          norm2 += c * c;
        }
      } while (norm2 < 1e-6);
    }
    s.points.push_back(std::move(x));
    s.frames.push_back(std::move(frame));
  }
  return s;
}

void require_dimension_above_two(const ManifoldSpec& spec, std::string_view what) {
  if (spec.n <= 2)
    throw GeometryError(std::string(what) + " requires dimension n > 2 (manifold '" + spec.name + "' has n = " +
                        std::to_string(spec.n) + ")");
}

}  // namespace pssc
