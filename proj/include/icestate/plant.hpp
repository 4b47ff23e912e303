#pragma once

#include <array>
#include <vector>

#include "icestate/config.hpp"
#include "icestate/params.hpp"

namespace icestate {

// Snow and ice temperature profiles on their front-fixed unit grids.  Ice
// node j sits at x = (j/N_i)*H measured down from the ice top; snow node k
// sits at x = -(k/N_s)*h, so T_s runs interface -> surface.  T_s is empty
// whenever the snow layer is inactive (thinner than snow_min_depth).
struct PlantState {
  std::vector<double> T_s;
  std::vector<double> T_i;
  double h = 0.0;
  double H = 0.0;
  double t = 0.0;
  // Fallen snow below the activation depth, carried without a layer.
  double pending_snow = 0.0;

  bool snow_active() const { return !T_s.empty(); }
};

struct GridConfig {
  int N_s = 24;
  int N_i = 120;
  double dt = 600.0;
  double theta = 1.0;
};

// Snow thinner than this is dropped; accumulation above it seeds a layer.
inline constexpr double snow_min_depth = 1e-3;

struct Measurements {
  double Y1;  // ice thickness, m
  double Y2;  // ice top temperature, degC
};

struct SurfaceResult {
  double T_surface;  // degC
  double melt_rate;  // boundary recession, m/s, <= 0 (0 on the cold branch)
  int newton_iters = 0;
};

enum class SurfaceLayer { snow, ice };

// Solves the quartic balance  F_a - I_0 - sigma*(T+273)^4 + k*dT/dx = 0 at
// the exposed surface, the conductive gradient taken one-sidedly from the
// given (old time level) profile.  Roots at or above the surface melting
// point switch to the melting branch: T is pinned at Tm1 and the flux
// surplus is returned as a recession rate -surplus/q_latent.
SurfaceResult surface_balance(const std::vector<double>& profile,
                              double thickness, const MonthlyForcing& forcing,
                              const ThermalParams& params, SurfaceLayer layer);

// Operator arrays for one front-fixed ice step on thickness H_new:
// diffusivity/H_new^2, upwindable velocity (eta*Hdot + a_dot)/H_new with
// a_dot the top ablation rate, and the penetrating shortwave source.
// Coefficients freeze at the old profile (clamped to Tm2/2 against the
// brine singularity) so one linear solve advances the layer.
struct IceOperator {
  std::vector<double> diff_eta;
  std::vector<double> vel;
  std::vector<double> src;
};
IceOperator ice_operator_coeffs(const std::vector<double>& T_old, double H_new,
                                double Hdot, double a_dot,
                                const ThermalParams& params, bool salinity_on,
                                const std::vector<double>& S_eta,
                                double source_amp);

// Salinity sampled at the ice grid's relative depths (time independent).
std::vector<double> salinity_profile(int N_i, const SalinityParams& sal);

struct StepDiagnostics {
  double T_surface = 0.0;
  double Hdot = 0.0;       // net ice thickness rate over the step, m/s
  double hdot = 0.0;       // net snow thickness rate over the step, m/s
  double melt_rate = 0.0;  // surface melting branch rate, m/s, <= 0
  double interface_flux_residual = 0.0;  // W/m^2, snow-covered steps only
  int newton_iters = 0;
};

// Advances the coupled snow/ice column by one dt: surface balance and the
// bottom Stefan rate from the old profile, thickness update, then one
// theta-weighted implicit solve per layer coupled through flux continuity
// at the interface.  Throws IceVanishedError when H reaches zero and
// SolverError on non-finite values.
StepDiagnostics step_plant(PlantState& state, const GridConfig& grid,
                           const MonthlyForcing& forcing,
                           const ThermalParams& params, double snow_rate,
                           bool salinity_on, const std::vector<double>& S_eta);

// Snowfall rate (m/s) at time t: the annual depth spread uniformly over
// September through May, zero June through August.
double snowfall_rate(double t, double annual_depth);

// Thickness and ice top temperature of the current state (noise belongs to
// the caller).
Measurements measure(const PlantState& state);

// January initial condition: linear ice profile T0 -> Tm1 plus a sine
// perturbation of amplitude sine_amp, snow profile flux-matched to it, the
// shared interface value T0 solving the quartic balance at t = 0.
PlantState init_plant_state(const Config& cfg);

struct AnnualSample {
  double t = 0.0;
  double h = 0.0;
  double H = 0.0;
  double T_surface = 0.0;
  std::array<double, 11> T_eta{};  // ice temperature at eta = 0, 0.1, ..., 1
};

struct AnnualSeries {
  std::vector<AnnualSample> samples;
  double max_H = 0.0;
  double max_abs_Hdot = 0.0;  // m/s, over all steps
  bool H_bound_ok = true;     // max H stayed below run.H_bar
  bool Hdot_bound_ok = true;  // max |Hdot| stayed below run.M_bound
  PlantState final_state;
};

// Seasonal simulation for run.years years, sampled every sample_stride
// steps; also tracks the standing-assumption monitors.
AnnualSeries run_annual(const Config& cfg);

}  // namespace icestate
