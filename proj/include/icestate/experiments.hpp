#pragma once

#include <string>
#include <vector>

#include "icestate/config.hpp"
#include "icestate/observer.hpp"
#include "icestate/plant.hpp"

namespace icestate {

// Diagnostics row sampled every run.sample_stride steps.
struct EstimationSample {
  double t_days = 0.0;
  double Phi = 0.0;
  double Linf = 0.0;
  double H_tilde = 0.0;
};

// True and estimated profiles on the plant grid at one requested day.
struct ProfileSnapshot {
  double t_days = 0.0;
  std::vector<double> x;       // m, down from the ice top
  std::vector<double> T_true;  // degC
  std::vector<double> T_hat;   // degC, interpolated onto x
};

struct EstimationResult {
  std::vector<EstimationSample> series;
  std::vector<ProfileSnapshot> snapshots;
  double fitted_rate = 0.0;      // 1/s over the sampled series, 0 if undefined
  double t10_days = -1.0;        // first t with Phi <= 0.1*Phi(0); -1 if never
  double overshoot_peak = 0.0;   // max over t, x of (T_hat - T), degC
  double overshoot_t_days = 0.0;
  PlantState plant;
  ObserverState obs;
};

// January scenario: plant from the linear-plus-sine initial profile, the
// estimator from its quadratic initial guess (or matched when configured),
// both advanced side by side for run.days.  Measurements carry additive
// Gaussian noise when run.noise_* is nonzero, seeded by run.seed.  The
// threshold scan for t10 uses every step, not just sampled rows.
EstimationResult run_estimation(const Config& cfg);

struct CompareResult {
  EstimationResult closed;
  EstimationResult open;
  double speedup = 0.0;       // t10(open) / t10(closed)
  bool closed_reached = false;
  bool open_reached = false;  // false makes speedup a lower bound
};

// Identical initial data with the injection gains on and off.
CompareResult run_compare(const Config& cfg);

struct SweepRow {
  double lambda = 0.0;
  double overshoot_peak = 0.0;
  double overshoot_t_days = 0.0;
  double t10_days = -1.0;
  double fitted_rate = 0.0;
};

// Closed-loop estimation per decay parameter, everything else shared.
std::vector<SweepRow> run_sweep(const Config& cfg,
                                const std::vector<double>& lambdas);

struct OutputOptions {
  std::string out_dir = "out";
  bool gnuplot = false;  // also emit companion .gp scripts
};

// Command drivers behind the CLI: run, write CSV/SVG artifacts plus
// summary.txt into out_dir, print one line per embedded check, and return 0
// iff every check passed.
int cmd_simulate(const Config& cfg, const OutputOptions& out);
int cmd_estimate(const Config& cfg, const OutputOptions& out);
int cmd_compare(const Config& cfg, const OutputOptions& out);
int cmd_sweep(const Config& cfg, const std::vector<double>& lambdas,
              const OutputOptions& out);
int cmd_kernels_check(const Config& cfg, const OutputOptions& out);

}  // namespace icestate
