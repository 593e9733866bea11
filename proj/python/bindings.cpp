#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffavg/checks.hpp"
#include "diffavg/density.hpp"
#include "diffavg/diffusion.hpp"
#include "diffavg/error.hpp"
#include "diffavg/lamb.hpp"
#include "diffavg/operators.hpp"
#include "diffavg/spectrum.hpp"
#include "diffavg/states.hpp"
#include "diffavg/transform.hpp"

namespace py = pybind11;
using namespace diffavg;

namespace {

ModelParams make_params(double h, double a, double b) {
  ModelParams p = ModelParams::isotropic(h, a, b, 1);
  p.validate();
  return p;
}

// Mode norms of a trajectory, one row per output time.
py::dict trajectory_norms(const Trajectory& tr) {
  py::dict out;
  out["times"] = tr.times;
  if (tr.states.empty()) return out;
  for (const auto& [k, f] : tr.states.front().modes()) {
    std::vector<double> norms;
    for (const auto& s : tr.states) norms.push_back(s.mode_norm(k));
    out[py::int_(k)] = norms;
  }
  out["truncation_error"] = tr.truncation_error;
  return out;
}

}  // namespace

PYBIND11_MODULE(_diffavg, m) {
  m.doc() = "Diffusion-averaged quantum model: numerical core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
  py::register_exception<GridMismatchError>(m, "GridMismatchError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<UnsupportedSymbolError>(m, "UnsupportedSymbolError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());
  py::register_exception<InsufficientSignalError>(m, "InsufficientSignalError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&make_params), py::arg("h") = 1.0, py::arg("a") = 1.0, py::arg("b") = 1.0)
      .def_property_readonly("h", [](const ModelParams& p) { return p.h; })
      .def_property_readonly("a", [](const ModelParams& p) { return p.a[0]; })
      .def_property_readonly("b", [](const ModelParams& p) { return p.b[0]; })
      .def("position_variance", [](const ModelParams& p) { return p.position_variance(0); })
      .def("momentum_variance", [](const ModelParams& p) { return p.momentum_variance(0); });

  py::class_<PositionGrid>(m, "PositionGrid")
      .def_static("centered", &PositionGrid::centered, py::arg("size"), py::arg("half_width"))
      .def_readonly("start", &PositionGrid::start)
      .def_readonly("step", &PositionGrid::step)
      .def_readonly("size", &PositionGrid::size)
      .def("points", &PositionGrid::points);

  py::class_<PhaseGrid>(m, "PhaseGrid")
      .def_static("conjugate", &PhaseGrid::conjugate, py::arg("q"), py::arg("h"), py::arg("oversample") = 1)
      .def_readonly("q", &PhaseGrid::q)
      .def_readonly("p_step", &PhaseGrid::p_step)
      .def_readonly("p_size", &PhaseGrid::p_size)
      .def("p_points", &PhaseGrid::p_points);

  py::class_<WaveFunction>(m, "WaveFunction")
      .def(py::init<PositionGrid, Eigen::VectorXcd>(), py::arg("grid"), py::arg("values"))
      .def_readonly("grid", &WaveFunction::grid)
      .def_readonly("values", &WaveFunction::values)
      .def("norm", &WaveFunction::norm)
      .def("normalized", &WaveFunction::normalized);
  m.def("relative_l2_error", &relative_l2_error);

  m.def("gaussian_state", &states::gaussian, py::arg("grid"), py::arg("params"), py::arg("q0") = 0.0,
        py::arg("p0") = 0.0);
  m.def("oscillator_state", &states::oscillator, py::arg("grid"), py::arg("h"), py::arg("n"),
        py::arg("mass") = 1.0, py::arg("omega") = 1.0);
  m.def("random_corpus", &states::random_corpus, py::arg("grid"), py::arg("h"), py::arg("seed"),
        py::arg("count"));

  py::class_<ExtendedAmplitude>(m, "ExtendedAmplitude")
      .def_property_readonly("grid", &ExtendedAmplitude::grid)
      .def("mode", &ExtendedAmplitude::mode)
      .def("has_mode", &ExtendedAmplitude::has_mode)
      .def("modes", [](const ExtendedAmplitude& a) {
        std::vector<int> ks;
        for (const auto& [k, f] : a.modes()) ks.push_back(k);
        return ks;
      })
      .def("mode_norm", &ExtendedAmplitude::mode_norm)
      .def("norm", &ExtendedAmplitude::norm)
      .def("reality_defect", &ExtendedAmplitude::reality_defect)
      .def("__add__", [](const ExtendedAmplitude& a, const ExtendedAmplitude& b) { return a + b; })
      .def("__rmul__", [](const ExtendedAmplitude& a, double s) { return s * a; });

  m.def("synthesize", &synthesize, py::arg("psi"), py::arg("params"), py::arg("grid"), py::arg("k_trunc") = 3);
  m.def("extract", &extract, py::arg("phi"), py::arg("params"), py::arg("out_grid"));
  m.def("project_averaged", &project_averaged);

  py::class_<PhaseField>(m, "PhaseField")
      .def_readonly("grid", &PhaseField::grid)
      .def_readonly("values", &PhaseField::values)
      .def("integral", &PhaseField::integral)
      .def("min", &PhaseField::min)
      .def("position_marginal", &PhaseField::position_marginal);
  m.def("density", [](const WaveFunction& psi, const ModelParams& p, const PhaseGrid& g) -> PhaseField {
    return density_from_wavefunction(psi, p, g);
  });
  m.def("wigner", [](const WaveFunction& psi, const ModelParams& p, const PhaseGrid& g) -> PhaseField {
    return wigner(psi, p, g);
  });
  m.def("smoothing_check", &smoothing_check);

  py::class_<ObservableSymbol>(m, "ObservableSymbol")
      .def_static("parse", &ObservableSymbol::parse)
      .def_static("function", &ObservableSymbol::function, py::arg("f"), py::arg("name") = "python")
      .def("__call__", &ObservableSymbol::operator())
      .def_property_readonly("name", &ObservableSymbol::name);

  py::class_<OperatorKernel>(m, "OperatorKernel")
      .def_readonly("grid", &OperatorKernel::grid)
      .def_readonly("matrix", &OperatorKernel::matrix)
      .def("hermiticity_defect", &OperatorKernel::hermiticity_defect);
  m.def("kernel_by_quadrature", &kernel_by_quadrature);
  m.def("kernel_by_symbol",
        [](const ObservableSymbol& f, const ModelParams& p, const PositionGrid& g, bool order_zero) {
          return kernel_by_symbol(f, p, g, order_zero ? SymbolOrder::zero : SymbolOrder::exact);
        },
        py::arg("f"), py::arg("params"), py::arg("grid"), py::arg("order_zero") = false);
  m.def("expectation", &expectation);
  m.def("phase_average", &phase_average);

  m.def("oscillator_spectrum",
        [](double mass, double omega, const ModelParams& p, const PositionGrid& g, int count, bool remove) {
          return oscillator_spectrum(mass, omega, p, g, count, remove).eigenvalues;
        },
        py::arg("mass"), py::arg("omega"), py::arg("params"), py::arg("grid"), py::arg("count"),
        py::arg("remove_shift") = false);
  m.def("oscillator_shift", &oscillator_shift);

  m.def("ladder_eigenvalue", py::overload_cast<const ModelParams&, int, int>(&ladder_eigenvalue));
  m.def("ladder_state", &ladder_state, py::arg("grid"), py::arg("params"), py::arg("k"), py::arg("n"),
        py::arg("envelope"), py::arg("k_trunc") = 3);
  m.def("evolve",
        [](const ExtendedAmplitude& phi0, const ModelParams& p, std::vector<double> times, bool fd) {
          DiffusionSpec spec;
          spec.params = p;
          spec.times = std::move(times);
          spec.integrator = fd ? Integrator::finite_difference : Integrator::spectral_hermite;
          return trajectory_norms(evolve(phi0, spec));
        },
        py::arg("phi0"), py::arg("params"), py::arg("times"), py::arg("finite_difference") = false,
        "Mode norms along the diffusion at the given times.");
  m.def("fit_decay", [](const std::vector<double>& t, const std::vector<double>& n) {
    const DecayFit f = fit_decay(t, n);
    return py::make_tuple(f.rate, f.residual);
  });

  auto lm = m.def_submodule("lamb", "a/b from the 2s level increment");
  lm.def("inverse", [](double mhz, bool modern, int n) {
    const PhysicalConstants c = modern ? PhysicalConstants::modern() : PhysicalConstants::reproduction();
    const lamb::Estimate e = lamb::inverse(lamb::mhz_to_erg(mhz, c), c, n);
    py::dict d;
    d["a_over_b"] = e.a_over_b;
    d["delta_q"] = e.delta_q;
    d["delta_e_erg"] = e.delta_e_erg;
    d["delta_e_mhz"] = e.delta_e_mhz;
    return d;
  }, py::arg("delta_e_mhz"), py::arg("modern") = false, py::arg("n") = 2);
  lm.def("forward", [](double a_over_b, bool modern, int n) {
    const PhysicalConstants c = modern ? PhysicalConstants::modern() : PhysicalConstants::reproduction();
    return lamb::forward(a_over_b, c, n);
  }, py::arg("a_over_b"), py::arg("modern") = false, py::arg("n") = 2);

  py::class_<checks::CheckResult>(m, "CheckResult")
      .def_readonly("id", &checks::CheckResult::id)
      .def_readonly("name", &checks::CheckResult::name)
      .def_readonly("passed", &checks::CheckResult::passed)
      .def_readonly("measured", &checks::CheckResult::measured)
      .def_readonly("threshold", &checks::CheckResult::threshold)
      .def_readonly("detail", &checks::CheckResult::detail)
      .def("__str__", &checks::format);
  m.def("run_checks", &checks::run_all, py::arg("seed") = checks::default_seed);
}
