// Fields cross the boundary as complex128 numpy arrays: a scalar field on a
// d-dimensional grid of side n has shape (n,)*d, a vector field (d,)+(n,)*d.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "divcurl/calculus.hpp"
#include "divcurl/config.hpp"
#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"
#include "divcurl/runner.hpp"
#include "divcurl/spectral.hpp"

namespace py = pybind11;
using namespace divcurl;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

Grid grid_of(const CArray& a, int skip) {
  const int d = static_cast<int>(a.ndim()) - skip;
  if (d < 2) throw std::invalid_argument("field arrays need at least two spatial axes");
  const auto n = a.shape(skip);
  for (int i = skip; i < a.ndim(); ++i) {
    if (a.shape(i) != n) throw std::invalid_argument("field arrays must have equal spatial axes");
  }
  return Grid(d, static_cast<int>(n));
}

ScalarField scalar_in(const CArray& a) {
  Grid g = grid_of(a, 0);
  return ScalarField(g, std::vector<cplx>(a.data(), a.data() + g.size()));
}

VectorField vector_in(const CArray& a) {
  if (a.ndim() < 3) throw std::invalid_argument("vector field arrays need a component axis");
  Grid g = grid_of(a, 1);
  std::vector<ScalarField> parts;
  for (py::ssize_t c = 0; c < a.shape(0); ++c) {
    const cplx* p = a.data() + static_cast<std::size_t>(c) * g.size();
    parts.emplace_back(g, std::vector<cplx>(p, p + g.size()));
  }
  return VectorField(std::move(parts));
}

std::vector<py::ssize_t> spatial_shape(const Grid& g) { return std::vector<py::ssize_t>(static_cast<std::size_t>(g.dim()), g.n()); }

CArray scalar_out(const ScalarField& f) {
  CArray out(spatial_shape(f.grid()));
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

CArray vector_out(const VectorField& v) {
  auto shape = spatial_shape(v.grid());
  shape.insert(shape.begin(), v.components());
  CArray out(shape);
  cplx* p = out.mutable_data();
  for (const auto& c : v.parts()) p = std::copy(c.values().begin(), c.values().end(), p);
  return out;
}

}  // namespace

PYBIND11_MODULE(_divcurl, m) {
  m.doc() = "Div-curl and commutator estimates on the periodic torus";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("gradient", [](const CArray& f) { return vector_out(gradient(scalar_in(f))); }, py::arg("f"));
  m.def("divergence", [](const CArray& v) { return scalar_out(divergence(vector_in(v))); }, py::arg("v"));
  m.def("riesz", [](const CArray& f) { return vector_out(riesz(scalar_in(f))); }, py::arg("f"));
  m.def("leray_project", [](const CArray& v) { return vector_out(leray_project(vector_in(v))); }, py::arg("v"));
  m.def("fractional_laplacian", [](const CArray& f, double s) { return scalar_out(fractional_laplacian(scalar_in(f), s)); },
        py::arg("f"), py::arg("s"));
  m.def("curl_residual", [](const CArray& v) { return curl_residual(vector_in(v)); }, py::arg("v"));
  m.def("divergence_residual", [](const CArray& v) { return divergence_residual(vector_in(v)); }, py::arg("v"));

  m.def("lp_norm", [](const CArray& f, double p) { return lp_norm(scalar_in(f), p); }, py::arg("f"), py::arg("p"));
  m.def("lp_norm_vector", [](const CArray& v, double p) { return lp_norm(vector_in(v), p); }, py::arg("v"), py::arg("p"));
  m.def("neg_sobolev_proxy", [](const CArray& g, double s, double q) { return neg_sobolev_proxy(scalar_in(g), s, q); },
        py::arg("g"), py::arg("s"), py::arg("q"));
  m.def("dual_norm_h1", [](const CArray& g) { return dual_norm_h1(scalar_in(g)); }, py::arg("g"));
  m.def("dual_certify",
        [](const CArray& g, double q, int steps, double step_size) {
          const auto c = dual_certify(scalar_in(g), q, steps, step_size);
          return py::make_tuple(c.lower_bound, scalar_out(c.witness), c.trace);
        },
        py::arg("g"), py::arg("q"), py::arg("steps") = 60, py::arg("step_size") = 1.0);
  m.def("lorentz_q1_norm", [](std::vector<double> w, int d) { return lorentz_q1_norm(SequenceWeights(std::move(w)), d); },
        py::arg("weights"), py::arg("d"));
  m.def("weak_lp_functional", [](std::vector<double> s, double p) { return weak_lp_functional(s, p); },
        py::arg("s"), py::arg("p"));

  m.def("make_u", [](int d, int n, const std::string& recipe) { return scalar_out(make_u(Grid(d, n), recipe)); },
        py::arg("d"), py::arg("n"), py::arg("recipe"));
  m.def("commutator_singular_values",
        [](const CArray& u, int j, double band) { return materialize_commutator(scalar_in(u), j, band).singular_values(); },
        py::arg("u"), py::arg("j"), py::arg("band"));
  m.def("cwikel_singular_values",
        [](const CArray& u, double band) { return materialize_cwikel(scalar_in(u), band).singular_values(); },
        py::arg("u"), py::arg("band"));

  m.def("experiment_names", &experiment_names);
  m.def("parse_config", [](const std::string& text) { return to_json(parse_config(text)).dump(); }, py::arg("text"));
  m.def("run_config",
        [](const std::string& text, int jobs) {
          const auto config = parse_config(text);
          py::gil_scoped_release release;
          return record_json_text(run_experiment(config, jobs));
        },
        py::arg("text"), py::arg("jobs") = 1);
  m.def("run_to_directory",
        [](const std::string& text, const std::filesystem::path& out, int jobs) {
          const auto config = parse_config(text);
          py::gil_scoped_release release;
          return run(config, out, jobs).exit_code;
        },
        py::arg("text"), py::arg("out"), py::arg("jobs") = 1);
}
