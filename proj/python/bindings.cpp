#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rabiflow/config.hpp"
#include "rabiflow/emit.hpp"
#include "rabiflow/fit.hpp"
#include "rabiflow/harness.hpp"
#include "rabiflow/quadrature.hpp"

namespace py = pybind11;
using namespace rabiflow;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<cplx> as_array(const std::vector<cplx>& v) {
  return py::array_t<cplx>(static_cast<py::ssize_t>(v.size()), v.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jaynes-Cummings wave-packet dynamics: exact oracle and semiclassical predictions";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SpectralError>(m, "SpectralError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double hbar, double g, double omega, double nu) {
             return ModelParams{hbar, g, omega, nu};
           }),
           py::arg("hbar") = 1.0, py::arg("g") = 1.0, py::arg("omega") = 0.0, py::arg("nu") = 0.0)
      .def_static("from_action_scale", &ModelParams::from_action_scale, py::arg("hbar"),
                  py::arg("lam"), py::arg("b_r"), py::arg("omega") = 0.0)
      .def_readwrite("hbar", &ModelParams::hbar)
      .def_readwrite("g", &ModelParams::g)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("nu", &ModelParams::nu)
      .def_property_readonly("delta", &ModelParams::delta)
      .def_property_readonly("lam", &ModelParams::lambda)
      .def_property_readonly("b_r", &ModelParams::b_r);

  py::enum_<AtomicPrep>(m, "AtomicPrep")
      .value("excited", AtomicPrep::excited)
      .value("plus_dressed", AtomicPrep::plus_dressed);

  py::class_<WavePacketPrep>(m, "WavePacketPrep")
      .def(py::init([](cplx alpha0, AtomicPrep atomic) { return WavePacketPrep{alpha0, atomic}; }),
           py::arg("alpha0"), py::arg("atomic") = AtomicPrep::excited)
      .def_readwrite("alpha0", &WavePacketPrep::alpha0)
      .def_readwrite("atomic", &WavePacketPrep::atomic)
      .def("action", &WavePacketPrep::action, py::arg("hbar"));

  m.def("mixing", [](double b, const ModelParams& p) {
    const Mixing mx = mixing(b, p);
    return py::make_tuple(mx.c, mx.s);
  });
  m.def("dressed_energy", &dressed_energy);
  m.def("phase_frequency_h", &phase_frequency_h);

  py::class_<ValidityWindow>(m, "ValidityWindow")
      .def_readonly("t_collapse", &ValidityWindow::t_collapse)
      .def_readonly("t_heisenberg", &ValidityWindow::t_heisenberg)
      .def_readonly("rabi_period", &ValidityWindow::rabi_period);
  m.def("validity_window", &validity_window, py::arg("params"), py::arg("prep"));

  m.def("sigma3_collapse", [](py::array_t<double> t, const WavePacketPrep& prep, const ModelParams& p) {
    return py::vectorize([&](double x) { return sigma3_collapse(x, prep, p); })(t);
  });
  m.def("sigma3_dressed", [](py::array_t<double> t, const WavePacketPrep& prep, const ModelParams& p) {
    return py::vectorize([&](double x) { return sigma3_dressed(x, prep, p); })(t);
  });
  m.def("field_amplitude", [](double t, const WavePacketPrep& prep, const ModelParams& p) {
    const FieldAmplitude f = field_amplitude_rotating(t, prep, p);
    return py::make_tuple(f.total, f.adiabatic);
  });

  m.def("gauss_hermite", [](int order) {
    const GaussHermiteRule r = gauss_hermite(order);
    return py::make_tuple(as_array(r.nodes), as_array(r.weights));
  });

  m.def("oracle_sigma3", [](const ModelParams& p, const WavePacketPrep& prep, std::vector<double> t) {
    return as_array(oracle_sigma3(p, prep, t).real());
  });
  m.def("oracle_field", [](const ModelParams& p, const WavePacketPrep& prep, std::vector<double> t) {
    return as_array(oracle_field(p, prep, t).values);
  });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("params", &ScenarioConfig::params)
      .def_readwrite("prep", &ScenarioConfig::prep)
      .def_readwrite("t_max_collapse_units", &ScenarioConfig::t_max_collapse_units)
      .def_readwrite("samples_per_rabi_period", &ScenarioConfig::samples_per_rabi_period)
      .def_readwrite("sigma3", &ScenarioConfig::sigma3)
      .def_readwrite("field", &ScenarioConfig::field)
      .def_readwrite("phase_space", &ScenarioConfig::phase_space);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("name") = "scenario");
  m.def("preset", [](const std::string& name) { return preset(name); });
  m.def("preset_names", &preset_names);

  m.def(
      "run_scenario",
      [](const ScenarioConfig& cfg) {
        ScenarioResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(cfg);
        }
        py::dict out;
        for (const TimeSeries& s : r.series) {
          out[py::str(s.key())] = py::make_tuple(as_array(s.t), as_array(s.values));
        }
        return out;
      });

  m.def("normalized_deviation",
        [](std::vector<double> t, std::vector<cplx> a, std::vector<cplx> b) {
          TimeSeries sa{"x", Provenance::closed_form, t, std::move(a)};
          TimeSeries sb{"x", Provenance::oracle, std::move(t), std::move(b)};
          return compare(sa, sb).normalized;
        });

  m.def("fit_collapse", [](std::vector<double> t, std::vector<double> y) {
    const CollapseFit f = fit_collapse(t, y);
    return py::make_tuple(f.t_collapse, f.residual);
  });

  m.def(
      "validate",
      [](int n_max) {
        const ValidationReport rep = run_validation(n_max);
        py::list rows;
        for (const ValidationRow& row : rep.rows) {
          rows.append(py::make_tuple(row.suite, row.b_r, row.identity, row.residual, row.pass()));
        }
        return py::make_tuple(rep.ok(), rows);
      },
      py::arg("n_max") = 128);

  m.def("format_double", &format_double);
}
