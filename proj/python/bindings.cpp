#include <iostream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cheegerlab/cheeger.hpp"
#include "cheegerlab/cli.hpp"
#include "cheegerlab/config.hpp"
#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/geometry.hpp"
#include "cheegerlab/ratio.hpp"
#include "cheegerlab/shapeopt.hpp"

namespace py = pybind11;
using namespace cheegerlab;

namespace {

// Masks and fields cross the boundary as (ny, nx) arrays, row j first.
py::array_t<bool> mask_to_array(const DomainMask& m) {
  py::array_t<bool> out({m.ny(), m.nx()});
  auto a = out.mutable_unchecked<2>();
  for (int j = 0; j < m.ny(); ++j)
    for (int i = 0; i < m.nx(); ++i) a(j, i) = m(i, j);
  return out;
}

DomainMask array_to_mask(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw InvalidArgument("mask array must be two-dimensional");
  const auto a = arr.unchecked<2>();
  DomainMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  for (py::ssize_t j = 0; j < a.shape(0); ++j)
    for (py::ssize_t i = 0; i < a.shape(1); ++i) m.set(static_cast<int>(i), static_cast<int>(j), a(j, i));
  return m;
}

py::array_t<double> field_to_array(const ScalarField& f) {
  py::array_t<double> out({f.grid.ny, f.grid.nx});
  auto a = out.mutable_unchecked<2>();
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) a(j, i) = f.values[f.grid.index(i, j)];
  return out;
}

double parse_p(const py::object& p) {
  if (py::isinstance<py::str>(p)) return parse_exponent(p.cast<std::string>());
  return p.cast<double>();
}

}  // namespace

PYBIND11_MODULE(_cheegerlab, m) {
  m.doc() = "Eigenvalues, Cheeger constants and the ratio F_{p,q} on planar grid domains";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.attr("inf") = kInfinity;

  py::class_<Grid2D>(m, "Grid2D")
      .def_readonly("nx", &Grid2D::nx)
      .def_readonly("ny", &Grid2D::ny)
      .def_readonly("h", &Grid2D::h)
      .def_readonly("ox", &Grid2D::ox)
      .def_readonly("oy", &Grid2D::oy)
      .def("__eq__", [](const Grid2D& a, const Grid2D& b) { return a == b; })
      .def("__repr__", [](const Grid2D& g) {
        return "Grid2D(nx=" + std::to_string(g.nx) + ", ny=" + std::to_string(g.ny) + ", h=" + std::to_string(g.h) + ")";
      });

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("max_iterations", &SolverOptions::max_iterations)
      .def_readwrite("tolerance", &SolverOptions::tolerance)
      .def_readwrite("seed", &SolverOptions::seed)
      .def_readwrite("continuation", &SolverOptions::continuation)
      .def_readwrite("inner_iterations", &SolverOptions::inner_iterations);

  m.def(
      "make_grid", [](int nx, int ny, std::pair<double, double> extent, std::pair<double, double> origin) {
        return make_grid(nx, ny, {extent.first, extent.second}, {origin.first, origin.second});
      },
      py::arg("nx"), py::arg("ny"), py::arg("extent"), py::arg("origin") = std::pair<double, double>{0.0, 0.0});
  m.def("rescale_spacing", &rescale_spacing, py::arg("grid"), py::arg("t"));
  m.def(
      "domain_grid", [](const std::string& shape, int resolution, int min_short_cells) {
        return domain_grid(*parse_shape(shape), resolution, min_short_cells);
      },
      py::arg("shape"), py::arg("resolution"), py::arg("min_short_cells") = 0,
      "Grid with a margin around the named shape.");
  m.def(
      "rasterize", [](const std::string& shape, const Grid2D& g) { return mask_to_array(rasterize(*parse_shape(shape), g)); },
      py::arg("shape"), py::arg("grid"));
  m.def(
      "perimeter_area",
      [](const py::array_t<bool>& mask, const Grid2D& g, const std::string& mode) {
        const PerimeterArea pa = perimeter_area(array_to_mask(mask), g, perimeter_mode_from_string(mode));
        return std::make_pair(pa.perimeter, pa.area);
      },
      py::arg("mask"), py::arg("grid"), py::arg("mode") = "isotropic");
  m.def(
      "inradius", [](const py::array_t<bool>& mask, const Grid2D& g) { return inradius(array_to_mask(mask), g); },
      py::arg("mask"), py::arg("grid"));

  m.def(
      "principal_eigen",
      [](const py::array_t<bool>& mask, const Grid2D& g, double p, const SolverOptions& opts) {
        const EigenResult r = principal_eigen(array_to_mask(mask), g, p, opts);
        py::dict d;
        d["lambda"] = r.lambda;
        d["eigenfunction"] = field_to_array(r.eigenfunction);
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("mask"), py::arg("grid"), py::arg("p") = 2.0, py::arg("opts") = SolverOptions{});
  m.def("eigen_1d", &eigen_1d, py::arg("length"), py::arg("p"), py::arg("n"), py::arg("opts") = SolverOptions{});
  m.def(
      "torsion",
      [](const py::array_t<bool>& mask, const Grid2D& g, double p, const SolverOptions& opts) {
        return field_to_array(torsion(array_to_mask(mask), g, p, opts).field);
      },
      py::arg("mask"), py::arg("grid"), py::arg("p") = 2.0, py::arg("opts") = SolverOptions{});
  m.def(
      "gamma_distance",
      [](const py::array_t<bool>& a, const py::array_t<bool>& b, const Grid2D& g, double p, const SolverOptions& opts) {
        return gamma_distance(array_to_mask(a), array_to_mask(b), g, p, opts);
      },
      py::arg("a"), py::arg("b"), py::arg("grid"), py::arg("p") = 2.0, py::arg("opts") = SolverOptions{});

  m.def(
      "cheeger",
      [](const py::array_t<bool>& mask, const Grid2D& g, const std::string& mode, const SolverOptions& opts) {
        const CheegerResult r = cheeger_dinkelbach(array_to_mask(mask), g, perimeter_mode_from_string(mode), opts);
        py::dict d;
        d["h"] = r.h;
        d["cheeger_set"] = mask_to_array(r.cheeger_set);
        d["history"] = r.history;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("mask"), py::arg("grid"), py::arg("mode") = "isotropic", py::arg("opts") = SolverOptions{});
  m.def(
      "cheeger_bruteforce",
      [](const py::array_t<bool>& mask, const Grid2D& g) { return cheeger_bruteforce(array_to_mask(mask), g).h; },
      py::arg("mask"), py::arg("grid"));
  m.def(
      "cheeger_convex_oracle", [](const std::string& shape) { return cheeger_convex_oracle(*parse_shape(shape)); },
      py::arg("shape"));

  m.def("pi_p", [](const py::object& p) { return pi_p(parse_p(p)); }, py::arg("p"));
  m.def(
      "ratio_F",
      [](const py::array_t<bool>& mask, const Grid2D& g, const py::object& p, const py::object& q,
         const SolverOptions& opts, bool convex) {
        const RatioReport r = ratio_F(array_to_mask(mask), g, parse_p(p), parse_p(q), opts);
        py::list checks;
        for (const Check& c : verify_inequalities(r, convex).rows) {
          py::dict row;
          row["check"] = c.name;
          row["lhs"] = c.lhs;
          row["rhs"] = c.rhs;
          row["margin"] = c.margin;
          row["pass"] = c.pass;
          checks.append(row);
        }
        py::dict d;
        d["p"] = r.p;
        d["q"] = r.q;
        d["lambda_root_p"] = r.lambda_root_p;
        d["lambda_root_q"] = r.lambda_root_q;
        d["F"] = r.F;
        d["checks"] = checks;
        return d;
      },
      py::arg("mask"), py::arg("grid"), py::arg("p") = 2.0, py::arg("q") = 1.0, py::arg("opts") = SolverOptions{},
      py::arg("convex") = false);

  m.def(
      "puncture_experiment",
      [](const std::vector<int>& n, const py::object& p, const py::object& q, const Grid2D& g, std::uint64_t seed) {
        std::vector<std::pair<int, double>> out;
        for (const PunctureRow& r : puncture_experiment(n, parse_p(p), parse_p(q), g, seed)) out.emplace_back(r.n, r.F);
        return out;
      },
      py::arg("n"), py::arg("p") = "inf", py::arg("q") = 1.0, py::arg("grid"), py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "cheegerlab");
        return run_cli(args, std::cout, std::cerr);
      },
      py::arg("args"), "Runs the command line tool in-process and returns its exit code.");
}
