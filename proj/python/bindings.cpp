#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pssc/catalog.hpp"
#include "pssc/connections.hpp"
#include "pssc/evaluate.hpp"
#include "pssc/theorems.hpp"

namespace py = pybind11;
using namespace pssc;

namespace {

ManifoldSpec source(const std::optional<std::string>& manifold, const std::optional<std::string>& file) {
  return resolve_manifold(manifold, file);
}

py::array_t<double> to_array(const Tensor& t) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.rank()), t.dim());
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projective semi-symmetric connection toolkit";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<CatalogError>(m, "CatalogError", PyExc_KeyError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<GateError>(m, "GateError", PyExc_RuntimeError);

  m.def("catalog_names", [] { return catalog_names(); });
  m.def("tensor_ids", [] { return tensor_ids(); });
  m.def("check_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : check_registry()) ids.push_back(c.id);
    return ids;
  });
  m.def("manifold_document", [](const std::string& name) { return emit_catalog_document(builtin(name)); },
        py::arg("name"));

  m.def(
      "evaluate",
      [](const std::string& tensor, const std::vector<double>& point, const std::optional<std::string>& manifold,
         const std::optional<std::string>& file) {
        Chart chart(source(manifold, file));
        NamedTensor t = evaluate_tensor(chart, tensor, point);
        return py::make_tuple(to_array(t.value), t.index_names, t.value.variance());
      },
      py::arg("tensor"), py::arg("point"), py::arg("manifold") = py::none(), py::arg("file") = py::none());

  m.def(
      "verify_json",
      [](const std::optional<std::string>& manifold, const std::optional<std::string>& file, int samples,
         std::uint64_t seed, const std::vector<std::string>& checks, const std::map<std::string, double>& tolerances) {
        RunOptions opts;
        opts.only = checks;
        for (const auto& [k, v] : tolerances) opts.tolerances[k] = v;
        ManifoldSpec spec = source(manifold, file);
        SampleSet s = sample(spec, samples, seed);
        Chart chart(std::move(spec));
        std::vector<std::string> lines;
        {
          py::gil_scoped_release release;
          for (const auto& r : run_checks(chart, s, opts)) lines.push_back(to_json(r).dump());
        }
        return lines;
      },
      py::arg("manifold") = py::none(), py::arg("file") = py::none(), py::arg("samples") = 200,
      py::arg("seed") = 42, py::arg("checks") = std::vector<std::string>{},
      py::arg("tolerances") = std::map<std::string, double>{});

  m.def("diff", [](const std::string& expr, const std::string& var) { return print(diff(parse(expr), var)); },
        py::arg("expr"), py::arg("var"));
  m.def("simplify", [](const std::string& expr) { return print(parse(expr)); }, py::arg("expr"));
  m.def(
      "eval_expr",
      [](const std::string& expr, const std::map<std::string, double>& bindings) {
        std::map<std::string, double, std::less<>> b(bindings.begin(), bindings.end());
        return eval(parse(expr), b);
      },
      py::arg("expr"), py::arg("bindings") = std::map<std::string, double>{});
}
