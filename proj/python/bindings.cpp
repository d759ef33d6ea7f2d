#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locsym/commands.hpp"
#include "locsym/config.hpp"
#include "locsym/detector.hpp"
#include "locsym/invariants.hpp"
#include "locsym/potential.hpp"
#include "locsym/solver.hpp"

namespace py = pybind11;
using namespace locsym;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Invariant non-local currents of 1D wave scattering";

    py::register_exception<Error>(m, "Error");
    py::register_exception<PhysicsError>(m, "PhysicsError");
    py::register_exception<ZeroCurrentError>(m, "ZeroCurrentError");
    py::register_exception<InvalidArgument>(m, "InvalidArgument");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<Slab>(m, "Slab")
        .def(py::init([](double x_left, double width, double u) { return Slab{x_left, width, u}; }),
             py::arg("x_left"), py::arg("width"), py::arg("u"))
        .def_readonly("x_left", &Slab::x_left)
        .def_readonly("width", &Slab::width)
        .def_readonly("u", &Slab::u);

    py::class_<Interval>(m, "Interval")
        .def(py::init([](double lo, double hi) { return Interval{lo, hi}; }))
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("__repr__", [](const Interval& iv) {
            return "Interval(" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + ")";
        });

    py::class_<PotentialProfile>(m, "PotentialProfile")
        .def(py::init<std::vector<Slab>, double, double>(), py::arg("slabs"), py::arg("u_left"),
             py::arg("u_right"))
        .def_property_readonly("slabs", &PotentialProfile::slabs)
        .def_property_readonly("u_left", &PotentialProfile::u_left)
        .def_property_readonly("u_right", &PotentialProfile::u_right)
        .def_property_readonly("breakpoints", &PotentialProfile::breakpoints)
        .def("eval", &PotentialProfile::eval)
        .def("bounding_box", &PotentialProfile::bounding_box, py::arg("pad") = -1.0);

    py::class_<SymmetryTransform>(m, "SymmetryTransform")
        .def(py::init([](int sigma, double rho) { return SymmetryTransform{sigma, rho}; }),
             py::arg("sigma"), py::arg("rho"))
        .def_static("inversion", &SymmetryTransform::inversion, py::arg("alpha"))
        .def_static("translation", &SymmetryTransform::translation, py::arg("length"))
        .def_readonly("sigma", &SymmetryTransform::sigma)
        .def_readonly("rho", &SymmetryTransform::rho)
        .def("__call__", py::overload_cast<double>(&SymmetryTransform::apply, py::const_))
        .def("__repr__", &SymmetryTransform::describe);

    m.def("symmetry_set",
          [](const PotentialProfile& p, const SymmetryTransform& f, double tol_u, double pad) {
              return symmetry_set(p, f, {tol_u, pad}).intervals();
          },
          py::arg("profile"), py::arg("transform"), py::arg("tol_u") = -1.0, py::arg("pad") = -1.0,
          "Maximal set where U(x) = U(F(x)), as a list of intervals");

    py::enum_<Incidence>(m, "Incidence").value("LEFT", Incidence::Left).value("RIGHT", Incidence::Right);

    py::class_<ScatteringState>(m, "ScatteringState")
        .def_property_readonly("transmission", &ScatteringState::transmission)
        .def_property_readonly("reflection", &ScatteringState::reflection)
        .def_property_readonly("energy", &ScatteringState::energy)
        .def("field_at", [](const ScatteringState& s, double x) {
            const FieldSample f = s.field_at(x);
            return py::make_tuple(f.value, f.deriv);
        })
        .def("current", &ScatteringState::current);

    m.def("solve_scattering", &solve_scattering, py::arg("profile"),
          py::arg("incidence") = Incidence::Left, py::arg("energy") = 0.0);
    m.def("superpose", &superpose);
    m.def("q_at", &q_at);
    m.def("qtilde_at", &qtilde_at);

    py::class_<InvariantPair>(m, "InvariantPair")
        .def_readonly("q", &InvariantPair::q)
        .def_readonly("q_tilde", &InvariantPair::q_tilde)
        .def_readonly("j", &InvariantPair::j)
        .def_readonly("transform", &InvariantPair::transform)
        .def_readonly("constancy_residual", &InvariantPair::constancy_residual)
        .def_readonly("scale", &InvariantPair::scale);

    m.def("invariant_pair",
          [](const ScatteringState& s, const SymmetryTransform& f, std::vector<Interval> domain,
             int n_samples) { return invariant_pair(s, f, Domain(std::move(domain)), n_samples); },
          py::arg("state"), py::arg("transform"), py::arg("domain"),
          py::arg("n_samples") = kDefaultSamples);
    m.def("sum_rule_residual", py::overload_cast<const InvariantPair&>(&sum_rule_residual));
    m.def("map_field",
          [](const InvariantPair& p, cplx value, cplx deriv) {
              return map_field(p, FieldSample{value, deriv});
          },
          py::arg("pair"), py::arg("value"), py::arg("deriv") = cplx{});
    m.def("eigenvalue_check", &eigenvalue_check, py::arg("pair"), py::arg("tol") = 1e-8,
          py::arg("zero_current_rel") = 1e-10);
    m.def("bloch_phase", &bloch_phase, py::arg("pair"), py::arg("tol") = 1e-8);

    m.def("unit_cell_half_trace", [](const PotentialProfile& p, double lo, double hi, double energy) {
        return unit_cell_transfer_matrix(p, {lo, hi}, energy).half_trace();
    }, py::arg("profile"), py::arg("lo"), py::arg("hi"), py::arg("energy") = 0.0);
    m.def("bloch_phase_of_cell",
          [](const PotentialProfile& p, double lo, double hi, double energy) -> std::optional<double> {
              const auto b = bloch_state(unit_cell_transfer_matrix(p, {lo, hi}, energy));
              if (const auto* mode = std::get_if<BlochMode>(&b)) return mode->phase;
              return std::nullopt;
          },
          py::arg("profile"), py::arg("lo"), py::arg("hi"), py::arg("energy") = 0.0,
          "Bloch phase of the cell, or None inside a band gap");

    m.def("detect",
          [](const PotentialProfile& p) {
              py::list out;
              for (const auto& f : detect(p)) {
                  py::list comps;
                  for (const auto& c : f.components) {
                      comps.append(py::make_tuple(c.source, c.image, to_string(c.kind)));
                  }
                  out.append(py::make_tuple(f.transform, comps));
              }
              return out;
          },
          "List of (transform, [(source, image, kind), ...])");

    m.def("cls_decompose",
          [](const PotentialProfile& p, double energy) {
              ClsOptions opt;
              opt.energy = energy;
              const ClsDecomposition cls = cls_decompose(p, opt);
              py::list pieces;
              for (const auto& piece : cls.pieces) {
                  pieces.append(py::make_tuple(piece.region, piece.transform, piece.invariants));
              }
              return py::make_tuple(cls.covered, pieces, cls_constraint_check(cls.pairs()));
          },
          py::arg("profile"), py::arg("energy") = 0.0,
          "(covered, [(region, transform, pair), ...], constraint residuals)");

    m.def("run_command",
          [](const std::string& name, const std::string& config_text, const std::string& out_dir) {
              const CommandFn fn = find_command(name);
              if (fn == nullptr) throw ConfigError("unknown command " + name);
              return fn(parse_config_text(config_text), out_dir);
          },
          py::arg("name"), py::arg("config_text"), py::arg("out_dir"));
}
