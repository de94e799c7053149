// Python bindings for the core operations: parameter tables, lattice and
// velocity setup, neighbor lists, force evaluation, NVE runs, and the
// verification harness.  Array-valued state crosses the boundary as numpy
// copies; mutation goes through property setters.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tmd/engine.hpp"
#include "tmd/error.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/potential_opt.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/system.hpp"
#include "tmd/verify.hpp"

namespace py = pybind11;
using namespace tmd;

namespace {

using DoubleArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray =
    py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>;

py::array_t<double> vec3_array(const std::vector<Vec3>& v) {
  py::array_t<double> out({py::ssize_t(v.size()), py::ssize_t(3)});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < py::ssize_t(v.size()); ++i) {
    r(i, 0) = v[std::size_t(i)].x;
    r(i, 1) = v[std::size_t(i)].y;
    r(i, 2) = v[std::size_t(i)].z;
  }
  return out;
}

std::vector<Vec3> vec3_vector(const DoubleArray& a, const char* what) {
  if (a.ndim() != 2 || a.shape(1) != 3)
    throw py::value_error(std::string(what) + " must be an (N, 3) array");
  auto r = a.unchecked<2>();
  std::vector<Vec3> out(std::size_t(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    out[std::size_t(i)] = {r(i, 0), r(i, 1), r(i, 2)};
  return out;
}

ForceOptions make_options(const std::string& scheme, const std::string& precision,
                          int width, int k_max, bool filter, int workers) {
  ForceOptions o;
  o.scheme = scheme_from_string(scheme);
  o.precision = precision_from_string(precision);
  o.width = width;
  o.k_max = k_max;
  o.filter = filter;
  o.workers = workers;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tersoff molecular dynamics core";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<ParamTable>(m, "ParamTable")
      .def_property_readonly("species_count", &ParamTable::species_count)
      .def_property_readonly("species_names",
                             [](const ParamTable& t) { return t.species_names(); })
      .def_property_readonly("r_cut_max", &ParamTable::r_cut_max)
      .def("serialize",
           [](const ParamTable& t) { return serialize_param_table(t); })
      .def("__repr__", [](const ParamTable& t) {
        return "<ParamTable of " + std::to_string(t.species_count()) +
               " species, r_cut_max " + std::to_string(t.r_cut_max()) + ">";
      });

  m.def("builtin_silicon", &builtin_silicon,
        "Standard silicon parameterization (same values as data/Si.tersoff)");
  m.def("load_params",
        [](const std::string& path) { return load_param_file(path); },
        py::arg("path"), "Load a parameter table from a file");
  m.def("parse_params",
        [](const std::string& text) { return parse_param_text(text, "<string>"); },
        py::arg("text"), "Parse a parameter table from a string");

  py::class_<SimulationBox>(m, "SimulationBox")
      .def(py::init<>())
      .def(py::init([](double lx, double ly, double lz, bool px, bool py_,
                       bool pz) {
             return SimulationBox{lx, ly, lz, px, py_, pz};
           }),
           py::arg("lx"), py::arg("ly"), py::arg("lz"),
           py::arg("periodic_x") = true, py::arg("periodic_y") = true,
           py::arg("periodic_z") = true)
      .def_readwrite("lx", &SimulationBox::lx)
      .def_readwrite("ly", &SimulationBox::ly)
      .def_readwrite("lz", &SimulationBox::lz)
      .def_readwrite("periodic_x", &SimulationBox::periodic_x)
      .def_readwrite("periodic_y", &SimulationBox::periodic_y)
      .def_readwrite("periodic_z", &SimulationBox::periodic_z)
      .def("__repr__", [](const SimulationBox& b) {
        return "<SimulationBox " + std::to_string(b.lx) + " x " +
               std::to_string(b.ly) + " x " + std::to_string(b.lz) + ">";
      });

  py::class_<AtomSystem>(m, "AtomSystem")
      .def(py::init<>())
      .def_property_readonly("natoms",
                             [](const AtomSystem& s) { return s.size(); })
      .def_property(
          "positions",
          [](const AtomSystem& s) { return vec3_array(s.positions); },
          [](AtomSystem& s, const DoubleArray& a) {
            s.positions = vec3_vector(a, "positions");
          })
      .def_property(
          "velocities",
          [](const AtomSystem& s) { return vec3_array(s.velocities); },
          [](AtomSystem& s, const DoubleArray& a) {
            s.velocities = vec3_vector(a, "velocities");
          })
      .def_property_readonly(
          "forces", [](const AtomSystem& s) { return vec3_array(s.forces); })
      .def_property(
          "species",
          [](const AtomSystem& s) {
            py::array_t<std::int32_t> out(py::ssize_t(s.species.size()));
            std::copy(s.species.begin(), s.species.end(), out.mutable_data());
            return out;
          },
          [](AtomSystem& s, const IntArray& a) {
            if (a.ndim() != 1)
              throw py::value_error("species must be a 1-d integer array");
            s.species.assign(a.data(), a.data() + a.size());
          })
      .def_readwrite("species_masses", &AtomSystem::species_masses)
      .def_readwrite("box", &AtomSystem::box)
      .def("validate", &AtomSystem::validate)
      .def("__repr__", [](const AtomSystem& s) {
        return "<AtomSystem of " + std::to_string(s.size()) + " atoms>";
      });

  m.def("make_diamond_lattice", &make_diamond_lattice, py::arg("nx"),
        py::arg("ny"), py::arg("nz"), py::arg("a0") = 5.431,
        py::arg("species_id") = 0, py::arg("mass") = 28.0855,
        "Cubic diamond lattice of nx*ny*nz conventional cells (8 atoms each)");
  m.def("init_velocities", &init_velocities, py::arg("system"),
        py::arg("temperature"), py::arg("seed"),
        "Seeded Maxwell-Boltzmann velocities with net momentum removed, "
        "rescaled to the exact target temperature");
  m.def("kinetic_energy", &kinetic_energy, py::arg("system"));
  m.def("temperature", &temperature, py::arg("system"));
  m.def("total_momentum",
        [](const AtomSystem& s) {
          const Vec3 p = total_momentum(s);
          return py::make_tuple(p.x, p.y, p.z);
        },
        py::arg("system"));

  py::class_<NeighborList>(m, "NeighborList")
      .def_property_readonly("natoms",
                             [](const NeighborList& l) { return l.size(); })
      .def_property_readonly(
          "pair_count",
          [](const NeighborList& l) { return l.neighbors.size(); })
      .def_readonly("skin", &NeighborList::skin)
      .def_readonly("build_cutoff", &NeighborList::build_cutoff)
      .def("segment",
           [](const NeighborList& l, std::size_t i) {
             if (i >= l.size())
               throw py::index_error("atom index out of range");
             const auto seg = l.segment(i);
             py::array_t<std::int32_t> out(py::ssize_t(seg.size()));
             std::copy(seg.begin(), seg.end(), out.mutable_data());
             return out;
           },
           py::arg("i"), "Sorted neighbor ids of atom i")
      .def("__repr__", [](const NeighborList& l) {
        return "<NeighborList of " + std::to_string(l.size()) + " atoms, " +
               std::to_string(l.neighbors.size()) + " entries>";
      });

  m.def("build_neighbor_list", &build_neighbor_list, py::arg("system"),
        py::arg("cutoff"), py::arg("skin") = 0.0,
        "Full, sorted Verlet list within cutoff + skin under minimum image");
  m.def("needs_rebuild", &needs_rebuild, py::arg("list"), py::arg("system"),
        "True once some atom drifted more than skin/2 from its reference");

  m.def("compute_ref",
        [](const AtomSystem& sys, const NeighborList& list,
           const ParamTable& params) {
          const EnergyForces ef = compute_ref(sys, list, params);
          return py::make_tuple(ef.energy, vec3_array(ef.forces));
        },
        py::arg("system"), py::arg("list"), py::arg("params"),
        "Reference double-precision evaluation; returns (energy, forces)");

  m.def("evaluate_forces",
        [](const AtomSystem& sys, const NeighborList& list,
           const ParamTable& params, const std::string& scheme,
           const std::string& precision, int width, int k_max, bool filter,
           int workers) {
          const EnergyForces ef = evaluate_forces(
              sys, list, params,
              make_options(scheme, precision, width, k_max, filter, workers));
          return py::make_tuple(ef.energy, vec3_array(ef.forces));
        },
        py::arg("system"), py::arg("list"), py::arg("params"),
        py::arg("scheme") = "auto", py::arg("precision") = "opt-d",
        py::arg("width") = 0, py::arg("k_max") = 16, py::arg("filter") = true,
        py::arg("workers") = 1,
        "Optimized evaluation; returns (energy, forces)");

  m.def("run_nve",
        [](const AtomSystem& sys, const ParamTable& params, long steps,
           double dt, double skin, const std::string& scheme,
           const std::string& precision, int width, int k_max, int workers,
           int thermo_every, int rebuild_check_every) {
          RunConfig cfg;
          cfg.steps = steps;
          cfg.dt = dt;
          cfg.skin = skin;
          cfg.scheme = scheme_from_string(scheme);
          cfg.precision = precision_from_string(precision);
          cfg.width = width;
          cfg.k_max = k_max;
          cfg.workers = workers;
          cfg.thermo_every = thermo_every;
          cfg.rebuild_check_every = rebuild_check_every;
          Engine engine(sys, params, cfg);
          const RunReport rep = engine.run();

          py::list samples;
          for (const ThermoSample& s : rep.samples) {
            py::dict row;
            row["step"] = s.step;
            row["time_ps"] = s.time_ps;
            row["temp_K"] = s.temp_k;
            row["pe_eV"] = s.pe_ev;
            row["ke_eV"] = s.ke_ev;
            row["etot_eV"] = s.etot_ev;
            samples.append(row);
          }
          py::dict out;
          out["samples"] = samples;
          out["wall_seconds"] = rep.wall_seconds;
          out["ns_per_day"] = rep.ns_per_day;
          out["scheme"] = std::string(to_string(rep.scheme));
          out["precision"] = std::string(to_string(rep.precision));
          out["width"] = rep.width;
          out["neighbor_rebuilds"] = engine.neighbor_rebuilds();
          out["csv"] = rep.to_csv();
          out["system"] = engine.system();
          return out;
        },
        py::arg("system"), py::arg("params"), py::arg("steps"),
        py::arg("dt") = 0.001, py::arg("skin") = 1.0,
        py::arg("scheme") = "auto", py::arg("precision") = "opt-d",
        py::arg("width") = 0, py::arg("k_max") = 16, py::arg("workers") = 1,
        py::arg("thermo_every") = 100, py::arg("rebuild_check_every") = 1,
        "Velocity-Verlet NVE run; returns samples, throughput, and the "
        "final system state");

  m.def("run_verification",
        [](const ParamTable& params, std::uint64_t seed) {
          py::list out;
          for (const CheckResult& c : run_verification(params, seed)) {
            py::dict row;
            row["name"] = c.name;
            row["pass"] = c.pass;
            row["detail"] = c.detail;
            out.append(row);
          }
          return out;
        },
        py::arg("params"), py::arg("seed") = std::uint64_t(715),
        "Full verification harness; returns one record per check");
}
