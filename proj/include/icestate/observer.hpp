#pragma once

#include <vector>

#include "icestate/config.hpp"
#include "icestate/kernels.hpp"
#include "icestate/params.hpp"
#include "icestate/plant.hpp"

namespace icestate {

// Estimator state: the temperature estimate on a front-fixed unit grid
// spanning [0, domain], the thickness estimate, and the measured thickness
// the profile currently lives on (they differ: the grid always follows the
// measurement, the thickness estimate has its own dynamics).
struct ObserverState {
  std::vector<double> T_hat;
  double H_hat = 0.0;
  double domain = 0.0;
  double t = 0.0;
};

struct ObserverConfig {
  GainParams gains;
  ThermalParams params;
  double Ibar0 = 0.0;  // reduced source amplitude, degC*m/s
  int N = 120;         // grid intervals
  double dt = 600.0;
  double theta = 1.0;
  bool open_loop = false;

  void validate() const;
};

// Observer settings implied by a full configuration.
ObserverConfig make_observer_config(const Config& cfg);

// Quadratic initial estimate built from the first measurement pair alone:
// value Y2 at the surface, the surface melting point at the bottom, minimum
// at depth d*Y1 with shape parameter d in [0, 1/2).
ObserverState init_observer(const ObserverConfig& oc, const Measurements& m0,
                            double d);

// Reference initialization: the estimate starts at the truth.
ObserverState init_observer_matched(const ObserverConfig& oc,
                                    const PlantState& plant);

// One estimator update against the measurements taken after the plant
// reached t + dt: innovation from the new thickness, gains at the measured
// thickness, explicit thickness update from the old profile gradient, then
// one implicit profile step on [0, Y1] with measurement-anchored boundary
// values.  open_loop zeroes every injection term.
void step_observer(ObserverState& state, const ObserverConfig& oc,
                   const Measurements& m_new);

// Estimation-error functional against the truth: the squared profile error
// integrated over the common domain plus the squared thickness error; the
// plant profile is interpolated onto the comparison nodes.
struct ErrorDiagnostics {
  double Phi = 0.0;
  double Linf = 0.0;     // max pointwise profile error, degC
  double H_tilde = 0.0;  // H - H_hat, m
};
ErrorDiagnostics error_diagnostics(const PlantState& plant,
                                   const ObserverState& obs);

// Backstepping image of the estimation error on the observer grid; its
// boundary values vanish at the surface and equal epsilon*H_tilde at the
// bottom when the injection anchors hold.
std::vector<double> target_profile(const PlantState& plant,
                                   const ObserverState& obs,
                                   const GainParams& g,
                                   QuadRule rule = QuadRule::simpson);

// Exponential rate fitted to ln(v) against t by least squares, skipping the
// leading transient fraction; positive when v decays.  Requires v > 0 on
// the fitted range.
double fitted_decay_rate(const std::vector<double>& t,
                         const std::vector<double>& v,
                         double skip_fraction = 0.1);

}  // namespace icestate
