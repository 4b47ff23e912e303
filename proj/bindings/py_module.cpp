#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icestate/bessel.hpp"
#include "icestate/config.hpp"
#include "icestate/errors.hpp"
#include "icestate/experiments.hpp"
#include "icestate/kernels.hpp"
#include "icestate/observer.hpp"
#include "icestate/params.hpp"
#include "icestate/plant.hpp"

namespace py = pybind11;
using namespace icestate;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Moving-boundary snow/sea-ice thermodynamics with a backstepping "
      "temperature-profile estimator";

  // Base exceptions first: translators run newest-first, so the derived
  // IceVanishedError must be registered after its base to win the catch.
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<IoError>(m, "IoError");
  auto solver_error =
      py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<IceVanishedError>(m, "IceVanishedError",
                                           solver_error.ptr());

  py::enum_<ForcingLookup>(m, "ForcingLookup")
      .value("piecewise_constant", ForcingLookup::piecewise_constant)
      .value("linear_midpoint", ForcingLookup::linear_midpoint);

  py::class_<MonthlyForcing>(m, "MonthlyForcing")
      .def_readwrite("F_r", &MonthlyForcing::F_r)
      .def_readwrite("F_L", &MonthlyForcing::F_L)
      .def_readwrite("F_s", &MonthlyForcing::F_s)
      .def_readwrite("F_l", &MonthlyForcing::F_l)
      .def_readwrite("alpha", &MonthlyForcing::alpha);

  py::class_<ForcingSchedule>(m, "ForcingSchedule")
      .def_readwrite("months", &ForcingSchedule::months)
      .def_readwrite("lookup_mode", &ForcingSchedule::lookup_mode);

  py::class_<ThermalParams>(m, "ThermalParams")
      .def_readwrite("sigma", &ThermalParams::sigma)
      .def_readwrite("k_s", &ThermalParams::k_s)
      .def_readwrite("rho_s", &ThermalParams::rho_s)
      .def_readwrite("c0", &ThermalParams::c0)
      .def_readwrite("k0", &ThermalParams::k0)
      .def_readwrite("rho", &ThermalParams::rho)
      .def_readwrite("gamma1", &ThermalParams::gamma1)
      .def_readwrite("gamma2", &ThermalParams::gamma2)
      .def_readwrite("I0", &ThermalParams::I0)
      .def_readwrite("kappa_i", &ThermalParams::kappa_i)
      .def_readwrite("Tm1", &ThermalParams::Tm1)
      .def_readwrite("Tm2", &ThermalParams::Tm2)
      .def_readwrite("q_latent", &ThermalParams::q_latent)
      .def_readwrite("F_w", &ThermalParams::F_w)
      .def("D_i", &ThermalParams::D_i)
      .def("beta", &ThermalParams::beta)
      .def("Ibar0", &ThermalParams::Ibar0);

  py::class_<SalinityParams>(m, "SalinityParams")
      .def_readwrite("A", &SalinityParams::A)
      .def_readwrite("n", &SalinityParams::n)
      .def_readwrite("m", &SalinityParams::m);

  py::class_<RunSettings>(m, "RunSettings")
      .def_readwrite("N_s", &RunSettings::N_s)
      .def_readwrite("N_i", &RunSettings::N_i)
      .def_readwrite("dt", &RunSettings::dt)
      .def_readwrite("theta", &RunSettings::theta)
      .def_readwrite("years", &RunSettings::years)
      .def_readwrite("days", &RunSettings::days)
      .def_readwrite("H0", &RunSettings::H0)
      .def_readwrite("h0", &RunSettings::h0)
      .def_readwrite("sine_amp", &RunSettings::sine_amp)
      .def_readwrite("d", &RunSettings::d)
      .def_readwrite("lambda_", &RunSettings::lambda)
      .def_readwrite("c", &RunSettings::c)
      .def_readwrite("epsilon", &RunSettings::epsilon)
      .def_readwrite("open_loop", &RunSettings::open_loop)
      .def_readwrite("matched_init", &RunSettings::matched_init)
      .def_readwrite("salinity_on", &RunSettings::salinity_on)
      .def_readwrite("interp_forcing", &RunSettings::interp_forcing)
      .def_readwrite("snow_annual_m", &RunSettings::snow_annual_m)
      .def_readwrite("noise_y1", &RunSettings::noise_y1)
      .def_readwrite("noise_y2", &RunSettings::noise_y2)
      .def_readwrite("seed", &RunSettings::seed)
      .def_readwrite("Ibar0", &RunSettings::Ibar0)
      .def_readwrite("H_bar", &RunSettings::H_bar)
      .def_readwrite("M_bound", &RunSettings::M_bound)
      .def_readwrite("snapshot_days", &RunSettings::snapshot_days)
      .def_readwrite("sample_stride", &RunSettings::sample_stride);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("thermal", &Config::thermal)
      .def_readwrite("forcing", &Config::forcing)
      .def_readwrite("salinity", &Config::salinity)
      .def_readwrite("run", &Config::run)
      .def("validate", &Config::validate);

  m.def("default_config", &default_config);
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"));

  // Gains and kernels.
  const ThermalParams default_thermal_params = default_config().thermal;
  const RunSettings default_run_settings{};
  py::class_<GainParams>(m, "GainParams")
      .def(py::init([](double lambda, double c, double epsilon, double D_i,
                       double beta) {
             return GainParams{lambda, c, epsilon, D_i, beta};
           }),
           py::arg("lambda_") = default_run_settings.lambda,
           py::arg("c") = default_run_settings.c,
           py::arg("epsilon") = default_run_settings.epsilon,
           py::arg("D_i") = default_thermal_params.D_i(),
           py::arg("beta") = default_thermal_params.beta())
      .def_readwrite("lambda_", &GainParams::lambda)
      .def_readwrite("c", &GainParams::c)
      .def_readwrite("epsilon", &GainParams::epsilon)
      .def_readwrite("D_i", &GainParams::D_i)
      .def_readwrite("beta", &GainParams::beta)
      .def("validate", &GainParams::validate);

  py::class_<GainEvaluation>(m, "GainEvaluation")
      .def_readonly("p1", &GainEvaluation::p1)
      .def_readonly("p2", &GainEvaluation::p2)
      .def_readonly("p3", &GainEvaluation::p3)
      .def_readonly("p4", &GainEvaluation::p4)
      .def_readonly("H_used", &GainEvaluation::H_used);

  py::enum_<QuadRule>(m, "QuadRule")
      .value("trapezoid", QuadRule::trapezoid)
      .value("simpson", QuadRule::simpson);

  m.def("kernel_q", &kernel_q, py::arg("x"), py::arg("y"), py::arg("g"));
  m.def("kernel_r", &kernel_r, py::arg("x"), py::arg("y"), py::arg("g"));
  m.def("kernel_psi", &kernel_psi, py::arg("x"), py::arg("H"), py::arg("g"));
  m.def("kernel_phi", &kernel_phi, py::arg("x"), py::arg("H"), py::arg("g"));
  m.def("kernel_f", &kernel_f, py::arg("x"), py::arg("H"), py::arg("g"));
  m.def("gain_p3", &gain_p3, py::arg("H"), py::arg("g"));
  m.def("gain_p4", &gain_p4, py::arg("H"), py::arg("g"));
  m.def("gains", &gains, py::arg("H"), py::arg("g"), py::arg("N"));
  m.def("to_target", &to_target, py::arg("T_tilde"), py::arg("H_tilde"),
        py::arg("H"), py::arg("g"), py::arg("rule") = QuadRule::trapezoid);
  m.def("from_target", &from_target, py::arg("w"), py::arg("H_tilde"),
        py::arg("H"), py::arg("g"), py::arg("rule") = QuadRule::trapezoid);
  m.def("bessel_ratio_I", &bessel_ratio_I, py::arg("j"), py::arg("z"));
  m.def("bessel_ratio_J", &bessel_ratio_J, py::arg("j"), py::arg("z"));

  // Simulation states and drivers.
  py::class_<PlantState>(m, "PlantState")
      .def_readonly("T_s", &PlantState::T_s)
      .def_readonly("T_i", &PlantState::T_i)
      .def_readonly("h", &PlantState::h)
      .def_readonly("H", &PlantState::H)
      .def_readonly("t", &PlantState::t)
      .def("snow_active", &PlantState::snow_active);

  py::class_<ObserverState>(m, "ObserverState")
      .def_readonly("T_hat", &ObserverState::T_hat)
      .def_readonly("H_hat", &ObserverState::H_hat)
      .def_readonly("domain", &ObserverState::domain)
      .def_readonly("t", &ObserverState::t);

  py::class_<AnnualSample>(m, "AnnualSample")
      .def_readonly("t", &AnnualSample::t)
      .def_readonly("h", &AnnualSample::h)
      .def_readonly("H", &AnnualSample::H)
      .def_readonly("T_surface", &AnnualSample::T_surface)
      .def_readonly("T_eta", &AnnualSample::T_eta);

  py::class_<AnnualSeries>(m, "AnnualSeries")
      .def_readonly("samples", &AnnualSeries::samples)
      .def_readonly("max_H", &AnnualSeries::max_H)
      .def_readonly("max_abs_Hdot", &AnnualSeries::max_abs_Hdot)
      .def_readonly("H_bound_ok", &AnnualSeries::H_bound_ok)
      .def_readonly("Hdot_bound_ok", &AnnualSeries::Hdot_bound_ok)
      .def_readonly("final_state", &AnnualSeries::final_state);

  py::class_<EstimationSample>(m, "EstimationSample")
      .def_readonly("t_days", &EstimationSample::t_days)
      .def_readonly("Phi", &EstimationSample::Phi)
      .def_readonly("Linf", &EstimationSample::Linf)
      .def_readonly("H_tilde", &EstimationSample::H_tilde);

  py::class_<ProfileSnapshot>(m, "ProfileSnapshot")
      .def_readonly("t_days", &ProfileSnapshot::t_days)
      .def_readonly("x", &ProfileSnapshot::x)
      .def_readonly("T_true", &ProfileSnapshot::T_true)
      .def_readonly("T_hat", &ProfileSnapshot::T_hat);

  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("series", &EstimationResult::series)
      .def_readonly("snapshots", &EstimationResult::snapshots)
      .def_readonly("fitted_rate", &EstimationResult::fitted_rate)
      .def_readonly("t10_days", &EstimationResult::t10_days)
      .def_readonly("overshoot_peak", &EstimationResult::overshoot_peak)
      .def_readonly("overshoot_t_days", &EstimationResult::overshoot_t_days)
      .def_readonly("plant", &EstimationResult::plant)
      .def_readonly("obs", &EstimationResult::obs);

  py::class_<CompareResult>(m, "CompareResult")
      .def_readonly("closed", &CompareResult::closed)
      .def_readonly("open", &CompareResult::open)
      .def_readonly("speedup", &CompareResult::speedup)
      .def_readonly("closed_reached", &CompareResult::closed_reached)
      .def_readonly("open_reached", &CompareResult::open_reached);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("lambda_", &SweepRow::lambda)
      .def_readonly("overshoot_peak", &SweepRow::overshoot_peak)
      .def_readonly("overshoot_t_days", &SweepRow::overshoot_t_days)
      .def_readonly("t10_days", &SweepRow::t10_days)
      .def_readonly("fitted_rate", &SweepRow::fitted_rate);

  m.def("run_annual", &run_annual, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_estimation", &run_estimation, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_compare", &run_compare, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_sweep", &run_sweep, py::arg("cfg"), py::arg("lambdas"),
        py::call_guard<py::gil_scoped_release>());

  m.def("fitted_decay_rate", &fitted_decay_rate, py::arg("t"), py::arg("v"),
        py::arg("skip_fraction") = 0.1);
}
