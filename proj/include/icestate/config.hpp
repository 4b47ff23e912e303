#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icestate/params.hpp"

namespace icestate {

// Solver, experiment, and observer settings ([run] section of the config).
struct RunSettings {
  int N_s = 24;              // snow grid intervals (nodes N_s + 1)
  int N_i = 120;             // ice grid intervals (nodes N_i + 1)
  double dt = 600.0;         // time step, s
  double theta = 1.0;        // implicitness weight in [0.5, 1]
  int years = 10;            // annual-cycle horizon
  double days = 3.0;         // estimation horizon, days
  double H0 = 3.0;           // initial ice thickness, m
  double h0 = 0.1;           // initial snow thickness, m
  double sine_amp = 1.0;     // initial-profile perturbation amplitude, degC
  double d = 0.25;           // observer initial-profile shape in [0, 1/2)
  double lambda = 5e-6;      // observer decay parameter, 1/s
  double c = 3e-5;           // thickness-gain parameter, 1/s
  double epsilon = 1.0;      // boundary-gain parameter
  bool open_loop = false;    // zero all injection gains
  bool matched_init = false; // observer starts from the plant profile
  bool salinity_on = true;   // brine-adjusted coefficients in the plant
  bool interp_forcing = false;
  double snow_annual_m = 0.3;  // annual snowfall depth, m
  double noise_y1 = 0.0;     // thickness measurement noise std dev, m
  double noise_y2 = 0.0;     // temperature measurement noise std dev, degC
  unsigned long seed = 0;
  std::optional<double> Ibar0;  // reduced-source override, degC*m/s
  double H_bar = 10.0;       // assumption monitor: admissible max H, m
  double M_bound = 1e-6;     // assumption monitor: admissible max |Hdot|, m/s
  std::vector<double> snapshot_days = {1.0, 2.0, 3.0};
  int sample_stride = 6;     // CSV cadence in steps

  void validate() const;
};

struct Config {
  ThermalParams thermal;
  ForcingSchedule forcing;
  SalinityParams salinity;
  RunSettings run;

  void validate() const;
};

Config default_config();

// Parse and validate a config file.  Sections: [thermal], [forcing.jan] ..
// [forcing.dec], [salinity], [run]; '#' comments; keys named exactly as the
// struct fields.  Throws ConfigError with the offending line number.
Config load_config(const std::string& path);

// Same grammar applied to an in-memory string (test entry point).
Config parse_config(const std::string& text);

}  // namespace icestate
