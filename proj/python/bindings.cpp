#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubeflat/cli.hpp"
#include "cubeflat/flat.hpp"
#include "cubeflat/io.hpp"
#include "cubeflat/lattice.hpp"
#include "cubeflat/presentation.hpp"

namespace py = pybind11;
using namespace cubeflat;

namespace {

// The Python side passes and receives JSON text; __init__.py wraps it in dicts.
std::string dichotomy_json(const std::string& data, std::size_t rank, std::int64_t radius) {
  return to_json(dichotomy(periodic_from_json(json::parse(data)), rank, radius)).dump();
}

std::string dual_json(const std::string& data) {
  return complex_to_json(dual(wallspace_from_json(json::parse(data)))).dump();
}

std::string obstruct_json(const std::string& data) {
  const auto d = intersections_from_json(json::parse(data));
  return to_json(obstruction(d.lattices, d.p, d.k)).dump();
}

std::string presentation_json(const std::string& text) {
  return to_json(tubular_obstruction(parse_presentation(text))).dump();
}

void validate_json(const std::string& data) { validate(periodic_from_json(json::parse(data))); }

std::pair<int, std::string> run_json(const std::string& name, const std::vector<std::string>& inputs,
                                     std::size_t rank, std::int64_t radius, bool strict) {
  Command cmd;
  cmd.name = name;
  cmd.inputs = inputs;
  cmd.rank = rank;
  cmd.radius = radius;
  cmd.strict = strict;
  auto r = execute(cmd);
  return {r.exit_code, r.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_cubeflat, m) {
  m.doc() = "cube complexes, periodic walls in flats, lattice obstructions";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::object lemma = py::str(to_string(e.lemma()));
      PyErr_SetObject(validation_error.ptr(), py::make_tuple(e.what(), lemma).ptr());
    } catch (const PresentationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const FormatError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("dichotomy_json", &dichotomy_json, py::arg("data"), py::arg("rank"), py::arg("radius") = 6);
  m.def("dual_json", &dual_json, py::arg("data"));
  m.def("obstruct_json", &obstruct_json, py::arg("data"));
  m.def("presentation_json", &presentation_json, py::arg("text"));
  m.def("validate_json", &validate_json, py::arg("data"));
  m.def("run_json", &run_json, py::arg("name"), py::arg("inputs"), py::arg("rank") = 0,
        py::arg("radius") = 6, py::arg("strict") = true);
  m.def("binomial", &binomial);
  m.def("hnf", [](std::size_t p, const std::vector<IntVector>& vectors) { return hnf(p, vectors).basis(); },
        py::arg("p"), py::arg("vectors"));
}
