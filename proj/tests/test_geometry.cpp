#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "pssc/catalog.hpp"
#include "pssc/geometry.hpp"

using namespace pssc;

namespace {

const char* kThreeDim = R"(
dim = 3
coords = x, y, z
g[0][0] = 1
g[0][1] = 0
g[0][2] = 0
g[1][0] = 0
g[1][1] = 1
g[1][2] = 0
g[2][0] = 0
g[2][1] = 0
g[2][2] = 1
xi[0] = 1
xi[1] = 0
xi[2] = 0
box[0] = -1, 1
box[1] = -1, 1
box[2] = -1, 1
)";

}  // namespace

TEST_CASE("load_spec reads a full 3x3 document") {
  ManifoldSpec s = load_spec(kThreeDim);
  CHECK(s.n == 3);
  CHECK(s.coords == std::vector<std::string>{"x", "y", "z"});
  CHECK_FALSE(s.needs_symmetry_check);
  CHECK_FALSE(s.has_gssf_structure());
}

TEST_CASE("load_spec rejects malformed documents") {
  const char* small_metric = R"(
dim = 3
coords = x, y, z
g[0][0] = 1
g[1][1] = 1
xi[0] = 1
box[0] = -1, 1
box[1] = -1, 1
box[2] = -1, 1
)";
  CHECK_THROWS_WITH_AS(load_spec(small_metric), doctest::Contains("dimension mismatch"), SpecError);

  std::string no_xi = kThreeDim;
  for (const char* line : {"xi[0] = 1\n", "xi[1] = 0\n", "xi[2] = 0\n"}) no_xi.erase(no_xi.find(line), std::strlen(line));
  CHECK_THROWS_AS(load_spec(no_xi), SpecError);

  std::string bad_expr = std::string(kThreeDim) + "f1 = 1 +\n";
  CHECK_THROWS_WITH_AS(load_spec(bad_expr), doctest::Contains("f1"), SpecError);

  std::string stranger = std::string(kThreeDim) + "f1 = w\n";
  CHECK_THROWS_AS(load_spec(stranger), SpecError);

  std::string empty_box = kThreeDim;
  empty_box.replace(empty_box.find("box[2] = -1, 1"), 14, "box[2] = 1, 1");
  CHECK_THROWS_AS(load_spec(empty_box), SpecError);
}

TEST_CASE("asymmetric metric text is flagged and checked numerically") {
  std::string doc = kThreeDim;
  doc.replace(doc.find("g[1][0] = 0"), 11, "g[1][0] = x");
  ManifoldSpec s = load_spec(doc);
  CHECK(s.needs_symmetry_check);
  Chart chart(s);
  std::vector<double> zero{0.0, 0.0, 0.0}, off{0.5, 0.0, 0.0};
  CHECK_NOTHROW(chart.metric_at(zero, 0));
  CHECK_THROWS_AS(chart.metric_at(off, 0), GeometryError);
}

TEST_CASE("JSON rendering is accepted") {
  const char* doc = R"({"dim": 3, "coords": ["theta", "phi", "t"],
    "g[0][0]": "1", "g[1][1]": "sin(theta)^2", "g[2][2]": 1,
    "xi[2]": "1", "box[0]": [0.3, 2.8415926535897933], "box[1]": [0.1, 6.1], "box[2]": [-1, 1],
    "parallel_xi_expected": true})";
  ManifoldSpec s = load_spec(doc);
  ManifoldSpec ref = builtin("cylinder_s2xr").spec;
  s.name = ref.name;
  CHECK(emit_spec(s) == emit_spec(ref));
}

TEST_CASE("emit_spec round trips every catalog entry") {
  for (const auto& name : catalog_names()) {
    ManifoldSpec s = builtin(name).spec;
    CHECK(emit_spec(load_spec(emit_spec(s))) == emit_spec(s));
  }
}

TEST_CASE("metric examples") {
  Chart flat(builtin("euclidean3").spec);
  std::vector<double> p{0.2, -0.4, 0.7};
  MetricValue m = flat.metric_at(p, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(m.G(i, j) == (i == j ? 1.0 : 0.0));
      for (int a = 0; a < 3; ++a) CHECK(m.dG(a, i, j) == 0.0);
    }

  Chart cyl(builtin("cylinder_s2xr").spec);
  std::vector<double> eq{M_PI / 2, 1.0, 0.0};
  MetricValue e = cyl.metric_at(eq, 0);
  CHECK(e.G(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> third{M_PI / 3, 1.0, 0.0};
  MetricValue t = cyl.metric_at(third, 0);
  CHECK(t.G(0, 0) == 1.0);
  CHECK(t.G(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(t.G(2, 2) == 1.0);
  CHECK(t.G(0, 1) == 0.0);
}

TEST_CASE("metric must be positive definite") {
  std::string doc = kThreeDim;
  doc.replace(doc.find("g[1][1] = 1"), 11, "g[1][1] = x");
  Chart chart(load_spec(doc));
  std::vector<double> bad{-0.5, 0.0, 0.0}, good{0.5, 0.0, 0.0};
  CHECK_THROWS_AS(chart.metric_at(bad, 0), GeometryError);
  CHECK_NOTHROW(chart.metric_at(good, 0));
}

TEST_CASE("pi is xi lowered") {
  Chart flat(builtin("euclidean3").spec);
  std::vector<double> p{0.1, 0.2, 0.3};
  PiValue a = pi_at(flat, p);
  CHECK(a.pi == Vector{1.0, 0.0, 0.0});
  CHECK(a.unit_residual == 0.0);

  Chart cyl(builtin("cylinder_s2xr").spec);
  std::vector<double> q{1.0, 2.0, 0.5};
  PiValue b = pi_at(cyl, q);
  CHECK(b.pi == Vector{0.0, 0.0, 1.0});

  // g(xi, xi) = 4 on the round sphere factor
  ManifoldSpec s = builtin("sphere3_bad_xi").spec;
  s.xi[2] = parse("2/(sin(chi)*sin(theta))");
  Chart doubled(s);
  std::vector<double> r{1.0, 1.2, 0.5};
  PiValue c = pi_at(doubled, r);
  CHECK(c.unit_residual > 0.1);
  CHECK(c.unit_residual == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sampling") {
  ManifoldSpec cyl = builtin("cylinder_s2xr").spec;
  SampleSet a = sample(cyl, 100, 7), b = sample(cyl, 100, 7);
  REQUIRE(a.points.size() == 100);
  CHECK(a.points == b.points);
  for (std::size_t k = 0; k < a.frames.size(); ++k)
    for (int v = 0; v < 4; ++v) CHECK(a.frames[k][v] == b.frames[k][v]);

  SampleSet c = sample(cyl, 100, 8);
  CHECK(c.points != a.points);

  for (std::size_t k = 0; k < a.points.size(); ++k) {
    double theta = a.points[k][0];
    CHECK(theta >= 0.3);
    CHECK(theta <= M_PI - 0.3);
    CHECK(in_box(cyl, a.points[k]));
    for (const auto& v : a.frames[k]) {
      double norm = 0.0;
      for (double x : v) {
        CHECK(std::abs(x) <= 1.0);
        norm += x * x;
      }
      CHECK(std::sqrt(norm) >= 1e-3);
    }
  }
  CHECK_THROWS_AS(sample(cyl, 0, 7), GeometryError);
}

TEST_CASE("dimension gate") {
  const char* plane = R"(
dim = 2
coords = x, y
g[0][0] = 1
g[1][1] = 1
xi[0] = 1
box[0] = -1, 1
box[1] = -1, 1
)";
  ManifoldSpec s = load_spec(plane);
  CHECK(s.n == 2);
  CHECK_THROWS_AS(require_dimension_above_two(s, "checks"), GeometryError);
  CHECK_NOTHROW(require_dimension_above_two(builtin("euclidean3").spec, "checks"));
}

TEST_CASE("metric invariants on every catalog entry") {
  for (const auto& name : catalog_names()) {
    INFO(name);
    ManifoldSpec spec = builtin(name).spec;
    Chart chart(spec);
    SampleSet s = sample(spec, 100, 3);
    double sym = 0.0, inv = 0.0, unit = 0.0;
    for (const auto& p : s.points) {
      MetricValue m = chart.metric_at(p, 0);
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
          sym = std::max(sym, std::abs(m.G(i, j) - m.G(j, i)));
          double prod = 0.0;
          for (int k = 0; k < spec.n; ++k) prod += m.G(i, k) * m.G_inv(k, j);
          inv = std::max(inv, std::abs(prod - (i == j ? 1.0 : 0.0)));
        }
      unit = std::max(unit, pi_at(chart, p).unit_residual);
    }
    CHECK(sym <= 1e-14);
    CHECK(inv <= 1e-11);
    if (name != "sphere3_bad_xi") CHECK(unit <= 1e-10);
  }
}

TEST_CASE("third partials agree with finite differences of second partials") {
  Chart chart(builtin("gssf_c1").spec);
  std::vector<double> p{1.1, 0.4, 0.2};
  MetricValue m = chart.metric_at(p, 3);
  const double h = 1e-5;
  for (int a = 0; a < 3; ++a) {
    auto plus = p, minus = p;
    plus[a] += h;
    minus[a] -= h;
    MetricValue mp = chart.metric_at(plus, 2), mm = chart.metric_at(minus, 2);
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double fd = (mp.d2G(b, c, i, j) - mm.d2G(b, c, i, j)) / (2 * h);
            CHECK(std::abs(m.d3G(a, b, c, i, j) - fd) <= 1e-6);
          }
  }
}
