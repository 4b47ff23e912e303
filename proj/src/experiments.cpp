#include "icestate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "icestate/bessel.hpp"
#include "icestate/errors.hpp"
#include "icestate/io.hpp"
#include "icestate/kernels.hpp"
#include "icestate/numerics.hpp"

namespace icestate {

namespace {

// Accumulates PASS/FAIL lines, mirrors them to stdout, and lands them in
// summary.txt; the exit code is 0 iff every check passed.
struct CheckList {
  std::string text;
  bool all_pass = true;

  void check(const std::string& name, bool pass, const std::string& detail) {
    const std::string line =
        std::string(pass ? "PASS " : "FAIL ") + name + "  " + detail;
    text += line + "\n";
    std::printf("%s\n", line.c_str());
    all_pass = all_pass && pass;
  }
  void info(const std::string& name, const std::string& detail) {
    const std::string line = "INFO " + name + "  " + detail;
    text += line + "\n";
    std::printf("%s\n", line.c_str());
  }
  int finish(const std::string& out_dir) {
    write_text_file(out_dir + "/summary.txt", text);
    return all_pass ? 0 : 1;
  }
};

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), pattern, a);
  return buf;
}

std::string fmt2(const char* pattern, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

}  // namespace

EstimationResult run_estimation(const Config& cfg) {
  cfg.validate();
  const RunSettings& run = cfg.run;
  const ObserverConfig oc = make_observer_config(cfg);
  const GridConfig grid{run.N_s, run.N_i, run.dt, run.theta};
  const std::vector<double> S =
      run.salinity_on ? salinity_profile(run.N_i, cfg.salinity)
                      : std::vector<double>{};
  PlantState plant = init_plant_state(cfg);

  std::mt19937_64 rng(run.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const bool noisy = run.noise_y1 > 0.0 || run.noise_y2 > 0.0;
  const auto observe = [&]() {
    Measurements m = measure(plant);
    if (noisy) {
      m.Y1 += run.noise_y1 * n01(rng);
      m.Y2 += run.noise_y2 * n01(rng);
    }
    return m;
  };

  ObserverState obs = run.matched_init ? init_observer_matched(oc, plant)
                                       : init_observer(oc, observe(), run.d);

  EstimationResult res;
  const long long steps =
      std::llround(run.days * seconds_per_day / run.dt);

  std::vector<std::pair<long long, double>> snap_steps;
  for (double day : run.snapshot_days) {
    const long long s = std::llround(day * seconds_per_day / run.dt);
    if (s >= 0 && s <= steps) snap_steps.emplace_back(s, day);
  }
  std::sort(snap_steps.begin(), snap_steps.end());

  const int N = run.N_i;
  std::vector<double> t_all, phi_all;
  t_all.reserve(static_cast<std::size_t>(steps) + 1);
  phi_all.reserve(static_cast<std::size_t>(steps) + 1);

  const auto record = [&](long long i) {
    const ErrorDiagnostics d = error_diagnostics(plant, obs);
    t_all.push_back(plant.t);
    phi_all.push_back(d.Phi);
    // Signed overestimate on the estimator nodes, truth interpolated.
    const double dx_p = plant.H / static_cast<double>(N);
    const double dx_o = obs.domain / static_cast<double>(N);
    for (int j = 0; j <= N; ++j) {
      const double x = dx_o * static_cast<double>(j);
      const double over = obs.T_hat[static_cast<std::size_t>(j)] -
                          interp_cubic_uniform(plant.T_i, 0.0, dx_p, x);
      if (over > res.overshoot_peak) {
        res.overshoot_peak = over;
        res.overshoot_t_days = plant.t / seconds_per_day;
      }
    }
    if (i % run.sample_stride == 0 || i == steps) {
      res.series.push_back(
          {plant.t / seconds_per_day, d.Phi, d.Linf, d.H_tilde});
    }
  };
  const auto snapshot = [&](double day) {
    ProfileSnapshot snap;
    snap.t_days = day;
    const double dx_p = plant.H / static_cast<double>(N);
    const double dx_o = obs.domain / static_cast<double>(N);
    for (int j = 0; j <= N; ++j) {
      const double x = dx_p * static_cast<double>(j);
      snap.x.push_back(x);
      snap.T_true.push_back(plant.T_i[static_cast<std::size_t>(j)]);
      snap.T_hat.push_back(interp_cubic_uniform(obs.T_hat, 0.0, dx_o, x));
    }
    res.snapshots.push_back(std::move(snap));
  };

  record(0);
  std::size_t next_snap = 0;
  while (next_snap < snap_steps.size() && snap_steps[next_snap].first == 0) {
    snapshot(snap_steps[next_snap++].second);
  }
  for (long long i = 1; i <= steps; ++i) {
    const MonthlyForcing f = forcing_at(cfg.forcing, plant.t);
    const double rate = snowfall_rate(plant.t, run.snow_annual_m);
    step_plant(plant, grid, f, cfg.thermal, rate, run.salinity_on, S);
    step_observer(obs, oc, observe());
    record(i);
    while (next_snap < snap_steps.size() && snap_steps[next_snap].first == i) {
      snapshot(snap_steps[next_snap++].second);
    }
  }

  const double Phi0 = phi_all.front();
  for (std::size_t k = 0; k < phi_all.size(); ++k) {
    if (phi_all[k] <= 0.1 * Phi0) {
      res.t10_days = t_all[k] / seconds_per_day;
      break;
    }
  }
  try {
    res.fitted_rate = fitted_decay_rate(t_all, phi_all);
  } catch (const std::invalid_argument&) {
    res.fitted_rate = 0.0;  // matched starts have no decaying positive norm
  }
  res.plant = std::move(plant);
  res.obs = std::move(obs);
  return res;
}

CompareResult run_compare(const Config& cfg) {
  Config closed_cfg = cfg;
  closed_cfg.run.open_loop = false;
  Config open_cfg = cfg;
  open_cfg.run.open_loop = true;

  CompareResult r;
  r.closed = run_estimation(closed_cfg);
  r.open = run_estimation(open_cfg);
  r.closed_reached = r.closed.t10_days >= 0.0;
  r.open_reached = r.open.t10_days >= 0.0;
  // An unreached threshold contributes the horizon, making the ratio a
  // lower bound (flagged through open_reached).
  const double t10_open = r.open_reached ? r.open.t10_days : cfg.run.days;
  if (!r.closed_reached) {
    r.speedup = 0.0;
  } else if (r.closed.t10_days == 0.0) {
    r.speedup = t10_open == 0.0 ? 1.0
                                : std::numeric_limits<double>::infinity();
  } else {
    r.speedup = t10_open / r.closed.t10_days;
  }
  return r;
}

std::vector<SweepRow> run_sweep(const Config& cfg,
                                const std::vector<double>& lambdas) {
  std::vector<SweepRow> rows;
  for (double lam : lambdas) {
    Config c = cfg;
    c.run.lambda = lam;
    c.run.open_loop = false;
    const EstimationResult r = run_estimation(c);
    rows.push_back({lam, r.overshoot_peak, r.overshoot_t_days, r.t10_days,
                    r.fitted_rate});
  }
  return rows;
}

namespace {

std::vector<std::string> estimate_columns() {
  return {"t_days", "Phi", "Linf_C", "H_tilde_m", "fitted_rate"};
}

void write_series_csv(const std::string& path, const EstimationResult& r) {
  CsvWriter csv(path);
  csv.header(estimate_columns());
  for (const EstimationSample& s : r.series) {
    csv.row({s.t_days, s.Phi, s.Linf, s.H_tilde, r.fitted_rate});
  }
  csv.close();
}

PlotSeries phi_series(const EstimationResult& r, const std::string& label) {
  PlotSeries s;
  s.label = label;
  for (const EstimationSample& e : r.series) {
    s.x.push_back(e.t_days);
    s.y.push_back(e.Phi);
  }
  return s;
}

}  // namespace

int cmd_simulate(const Config& cfg, const OutputOptions& out) {
  ensure_dir(out.out_dir);
  const AnnualSeries series = run_annual(cfg);

  std::vector<std::string> cols = {"t_days", "h_m", "H_m", "T_surface_C"};
  for (int k = 0; k <= 10; ++k) {
    cols.push_back("T_ice_eta" + fmt("%.1f", static_cast<double>(k) / 10.0));
  }
  CsvWriter csv(out.out_dir + "/simulate.csv");
  csv.header(cols);
  PlotSeries sh{"snow depth h", {}, {}}, sH{"ice thickness H", {}, {}};
  if (cfg.run.years > 0) {
    for (const AnnualSample& s : series.samples) {
      std::vector<double> row = {s.t / seconds_per_day, s.h, s.H, s.T_surface};
      row.insert(row.end(), s.T_eta.begin(), s.T_eta.end());
      csv.row(row);
      sh.x.push_back(s.t / seconds_per_day);
      sh.y.push_back(s.h);
      sH.x.push_back(s.t / seconds_per_day);
      sH.y.push_back(s.H);
    }
  }
  csv.close();

  const PlotSpec spec{"Seasonal snow and ice thickness", "time [days]",
                      "thickness [m]"};
  write_svg_plot(out.out_dir + "/simulate.svg", spec, {sh, sH});
  if (out.gnuplot) {
    write_gnuplot_script(out.out_dir + "/simulate.gp", "simulate.csv", spec,
                         {{1, 2}, {1, 3}}, {"h_m", "H_m"});
  }

  CheckList checks;
  checks.check("thickness-bound-monitor", series.H_bound_ok,
               fmt2("max_H=%.4f m  bound=%.4f m", series.max_H, cfg.run.H_bar));
  checks.check(
      "growth-rate-monitor", series.Hdot_bound_ok,
      fmt2("max|Hdot|=%.3e m/s  bound=%.3e m/s", series.max_abs_Hdot,
           cfg.run.M_bound));

  // Year-over-year repeatability of H across the final simulated year,
  // reported as a flag: reaching the attractor depends on H0 and the horizon,
  // so convergence is the scenario's business, not a failure of the solver.
  if (cfg.run.years >= 2) {
    double drift = 0.0;
    bool compared = false;
    const std::vector<AnnualSample>& ss = series.samples;
    const double t_end = ss.back().t;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      if (ss[i].t < t_end - seconds_per_year - 1.0) continue;
      const double t_prev = ss[i].t - seconds_per_year;
      if (t_prev < 0.0) continue;
      const auto it = std::lower_bound(
          ss.begin(), ss.end(), t_prev,
          [](const AnnualSample& a, double t) { return a.t < t; });
      if (it == ss.end() || std::abs(it->t - t_prev) > cfg.run.dt / 2.0) {
        continue;
      }
      drift = std::max(drift, std::abs(ss[i].H - it->H));
      compared = true;
    }
    if (compared) {
      checks.info("annual-cycle-periodicity",
                  fmt("max|H(t)-H(t-1yr)|=%.4f m over the final year, ",
                      drift) +
                      (drift < 0.01 ? "periodic within 0.01 m"
                                    : "still drifting (gate 0.01 m)"));
    }
  }
  checks.info("rows", fmt("%g sampled", static_cast<double>(
                              cfg.run.years > 0 ? series.samples.size() : 0)));
  return checks.finish(out.out_dir);
}

int cmd_estimate(const Config& cfg, const OutputOptions& out) {
  ensure_dir(out.out_dir);
  const EstimationResult res = run_estimation(cfg);

  write_series_csv(out.out_dir + "/estimate.csv", res);
  for (const ProfileSnapshot& snap : res.snapshots) {
    CsvWriter csv(out.out_dir + "/profile_day" + fmt("%g", snap.t_days) +
                  ".csv");
    csv.header({"x_m", "T_true_C", "T_hat_C"});
    for (std::size_t j = 0; j < snap.x.size(); ++j) {
      csv.row({snap.x[j], snap.T_true[j], snap.T_hat[j]});
    }
    csv.close();
  }

  std::vector<PlotSeries> overlays;
  for (const ProfileSnapshot& snap : res.snapshots) {
    overlays.push_back(
        {"day " + fmt("%g", snap.t_days) + " true", snap.x, snap.T_true});
    overlays.push_back(
        {"day " + fmt("%g", snap.t_days) + " estimate", snap.x, snap.T_hat});
  }
  write_svg_plot(out.out_dir + "/estimate_profiles.svg",
                 {"Temperature profiles, truth vs estimate", "depth [m]",
                  "temperature [C]"},
                 overlays);
  const PlotSpec phi_spec{"Estimation error norm", "time [days]", "Phi"};
  write_svg_plot(out.out_dir + "/estimate_phi.svg", phi_spec,
                 {phi_series(res, "Phi")});
  if (out.gnuplot) {
    write_gnuplot_script(out.out_dir + "/estimate.gp", "estimate.csv",
                         phi_spec, {{1, 2}, {1, 3}}, {"Phi", "Linf_C"});
  }

  const EstimationSample& first = res.series.front();
  const EstimationSample& last = res.series.back();
  double peak_H = 0.0;
  for (const EstimationSample& s : res.series) {
    peak_H = std::max(peak_H, std::abs(s.H_tilde));
  }

  CheckList checks;
  checks.check("phi-contraction", last.Phi <= 0.1 * first.Phi,
               fmt2("Phi(end)/Phi(0)=%.4f  limit=%.2f",
                    first.Phi > 0.0 ? last.Phi / first.Phi : 0.0, 0.1));
  checks.check("profile-error-contraction", last.Linf <= 0.1 * first.Linf,
               fmt2("Linf(end)/Linf(0)=%.4f  limit=%.2f",
                    first.Linf > 0.0 ? last.Linf / first.Linf : 0.0, 0.1));
  if (cfg.run.noise_y1 == 0.0) {
    checks.check("thickness-error-start", first.H_tilde == 0.0,
                 fmt("H_tilde(0)=%.3e m", first.H_tilde));
  } else {
    checks.info("thickness-error-start",
                fmt("H_tilde(0)=%.3e m (thickness measurement noise on)",
                    first.H_tilde));
  }
  checks.check("thickness-error-return",
               peak_H > 0.0 && std::abs(last.H_tilde) < 0.1 * peak_H,
               fmt2("|H_tilde(end)|=%.3e m  peak=%.3e m",
                    std::abs(last.H_tilde), peak_H));
  checks.info("fitted-rate", fmt("%.4e 1/s", res.fitted_rate));
  checks.info("t10", fmt("%.3f days", res.t10_days));
  return checks.finish(out.out_dir);
}

int cmd_compare(const Config& cfg, const OutputOptions& out) {
  ensure_dir(out.out_dir);
  const CompareResult r = run_compare(cfg);

  write_series_csv(out.out_dir + "/compare_closed.csv", r.closed);
  write_series_csv(out.out_dir + "/compare_open.csv", r.open);
  const PlotSpec spec{"Error norm, injection on vs off", "time [days]",
                      "Phi"};
  write_svg_plot(out.out_dir + "/compare_phi.svg", spec,
                 {phi_series(r.closed, "backstepping"),
                  phi_series(r.open, "open loop")});
  if (out.gnuplot) {
    write_gnuplot_script(out.out_dir + "/compare.gp", "compare_closed.csv",
                         spec, {{1, 2}}, {"Phi closed"});
  }

  CheckList checks;
  std::string detail =
      fmt2("t10_closed=%.3f d  t10_open=%.3f d", r.closed.t10_days,
           r.open_reached ? r.open.t10_days : cfg.run.days) +
      fmt("  ratio=%.2f", r.speedup) +
      (r.open_reached ? "" : " (lower bound: open loop never reached 10%)");
  checks.check("convergence-speedup", r.closed_reached && r.speedup >= 3.0,
               detail);
  return checks.finish(out.out_dir);
}

int cmd_sweep(const Config& cfg, const std::vector<double>& lambdas,
              const OutputOptions& out) {
  ensure_dir(out.out_dir);
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  const std::vector<SweepRow> rows = run_sweep(cfg, sorted);

  CsvWriter csv(out.out_dir + "/sweep.csv");
  csv.header({"lambda", "overshoot_peak_C", "overshoot_t_days", "t10_days",
              "fitted_rate"});
  PlotSeries over{"peak overestimate", {}, {}};
  for (const SweepRow& r : rows) {
    csv.row({r.lambda, r.overshoot_peak, r.overshoot_t_days, r.t10_days,
             r.fitted_rate});
    over.x.push_back(r.lambda);
    over.y.push_back(r.overshoot_peak);
  }
  csv.close();
  write_svg_plot(out.out_dir + "/sweep_overshoot.svg",
                 {"Peak signed overestimate vs decay parameter", "lambda [1/s]",
                  "peak (T_hat - T) [C]"},
                 {over});
  if (out.gnuplot) {
    write_gnuplot_script(out.out_dir + "/sweep.gp", "sweep.csv",
                         {"Overshoot vs lambda", "lambda [1/s]", "peak [C]"},
                         {{1, 2}}, {"overshoot"});
  }

  CheckList checks;
  bool increasing = rows.size() >= 2;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    increasing = increasing && rows[i].overshoot_peak > rows[i - 1].overshoot_peak;
  }
  std::string detail;
  for (const SweepRow& r : rows) {
    detail += fmt2("(lambda=%.1e: %.3f C) ", r.lambda, r.overshoot_peak);
  }
  checks.check("overshoot-ordering", increasing, detail);
  return checks.finish(out.out_dir);
}

int cmd_kernels_check(const Config& cfg, const OutputOptions& out) {
  ensure_dir(out.out_dir);

  GainParams gentle{2e-7, cfg.run.c, cfg.run.epsilon, cfg.thermal.D_i(),
                    cfg.thermal.beta()};
  GainParams physical{cfg.run.lambda, cfg.run.c, cfg.run.epsilon,
                      cfg.thermal.D_i(), cfg.thermal.beta()};
  const double H = 3.0;

  CsvWriter csv(out.out_dir + "/kernels_check.csv");
  csv.header({"check", "setting", "measured", "tolerance", "status"});
  CheckList checks;
  const auto table_row = [&](const std::string& name,
                             const std::string& setting, double measured,
                             double tol, bool pass) {
    csv.row_cells({name, setting, format_g(measured), format_g(tol),
                   pass ? "pass" : "fail"});
    checks.check(name, pass,
                 "setting=" + setting + "  measured=" + format_g(measured) +
                     "  tolerance=" + format_g(tol));
  };

  // Kernel wave equations: residuals on the verification point, convergence
  // order on both design points.
  const ResidualReport fine = kernel_pde_residual_check(gentle, H, 200);
  const ResidualReport coarse = kernel_pde_residual_check(gentle, H, 100);
  table_row("kernel-pde-residual-direct", "lambda=2e-7 n=200",
            fine.max_abs_q_residual / fine.max_abs_q, 1e-6,
            fine.max_abs_q_residual < 1e-6 * fine.max_abs_q);
  table_row("kernel-pde-residual-inverse", "lambda=2e-7 n=200",
            fine.max_abs_r_residual / fine.max_abs_r, 1e-6,
            fine.max_abs_r_residual < 1e-6 * fine.max_abs_r);
  const double order_q = coarse.max_abs_q_residual / fine.max_abs_q_residual;
  const double order_r = coarse.max_abs_r_residual / fine.max_abs_r_residual;
  table_row("kernel-pde-order-direct", "halving 100->200", order_q, 4.0,
            order_q > 3.0 && order_q < 5.5);
  table_row("kernel-pde-order-inverse", "halving 100->200", order_r, 4.0,
            order_r > 3.0 && order_r < 5.5);
  table_row("kernel-diagonal-slope-direct", "lambda=2e-7 n=200",
            fine.diag_slope_error_q, 1e-10, fine.diag_slope_error_q < 1e-10);
  table_row("kernel-diagonal-slope-inverse", "lambda=2e-7 n=200",
            fine.diag_slope_error_r, 1e-10, fine.diag_slope_error_r < 1e-10);

  const ResidualReport pfine = kernel_pde_residual_check(physical, H, 200);
  const ResidualReport pcoarse = kernel_pde_residual_check(physical, H, 100);
  table_row("kernel-pde-residual-direct",
            "lambda=" + format_g(physical.lambda) + " n=200",
            pfine.max_abs_q_residual / pfine.max_abs_q, 1e-3,
            pfine.max_abs_q_residual < 1e-3 * pfine.max_abs_q);
  const double porder =
      pcoarse.max_abs_q_residual / pfine.max_abs_q_residual;
  table_row("kernel-pde-order-direct",
            "lambda=" + format_g(physical.lambda) + " halving", porder, 4.0,
            porder > 3.0 && porder < 5.5);

  // Transform round trip, verification point and physical floor.
  const RoundTripReport rt =
      transform_roundtrip_check(gentle, H, 400, 20, 7u, QuadRule::simpson);
  table_row("transform-roundtrip", "lambda=2e-7 nodes=400 profiles=20",
            rt.max_rel_linf, 1e-6, rt.max_rel_linf < 1e-6);
  const RoundTripReport prt =
      transform_roundtrip_check(physical, H, 400, 5, 7u, QuadRule::simpson);
  table_row("transform-roundtrip",
            "lambda=" + format_g(physical.lambda) + " nodes=400 profiles=5",
            prt.max_rel_linf, 2e-2, prt.max_rel_linf < 2e-2);

  // Integral condition on the auxiliary thickness-rate function.
  const FConditionReport fg = f_condition_check(gentle, H, 400);
  table_row("aux-integral-condition", "lambda=2e-7 nodes=400",
            fg.max_abs_residual / fg.max_abs_rhs, 1e-7,
            fg.max_abs_residual < 1e-7 * fg.max_abs_rhs);
  const FConditionReport fp = f_condition_check(physical, H, 400);
  table_row("aux-integral-condition",
            "lambda=" + format_g(physical.lambda) + " nodes=400",
            fp.max_abs_residual / fp.max_abs_rhs, 2e-5,
            fp.max_abs_residual < 2e-5 * fp.max_abs_rhs);

  // Series evaluations against frozen references.
  struct BesselRef {
    int kind;  // 0: modified ratio, 1: oscillatory ratio
    int order;
    double z;
    double value;
  };
  const BesselRef refs[] = {
      {0, 1, 0.0, 0.5},
      {0, 2, 0.0, 0.125},
      {0, 1, 1.0, 0.56515910399248503},
      {0, 2, 2.0, 0.17223711192468455},
      {0, 1, 6.5, 15.036155503697156},
      {1, 1, 0.0, 0.5},
      {1, 1, 1.0, 0.44005058574493352},
  };
  for (const BesselRef& ref : refs) {
    const double got = ref.kind == 0 ? bessel_ratio_I(ref.order, ref.z)
                                     : bessel_ratio_J(ref.order, ref.z);
    const double rel = std::abs(got - ref.value) / std::abs(ref.value);
    table_row("series-reference",
              std::string(ref.kind == 0 ? "I" : "J") +
                  std::to_string(ref.order) + " z=" + format_g(ref.z),
              rel, 1e-12, rel < 1e-12);
  }

  csv.close();
  return checks.finish(out.out_dir);
}

}  // namespace icestate
