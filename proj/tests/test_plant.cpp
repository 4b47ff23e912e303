#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "icestate/config.hpp"
#include "icestate/errors.hpp"
#include "icestate/numerics.hpp"
#include "icestate/params.hpp"
#include "icestate/plant.hpp"

using namespace icestate;

namespace {

GridConfig grid_of(const Config& cfg) {
  return GridConfig{cfg.run.N_s, cfg.run.N_i, cfg.run.dt, cfg.run.theta};
}

std::vector<double> salinity_of(const Config& cfg) {
  return cfg.run.salinity_on ? salinity_profile(cfg.run.N_i, cfg.salinity)
                             : std::vector<double>{};
}

// Advances a fresh initial state by whole days under the config's forcing.
PlantState run_days(const Config& cfg, double days) {
  PlantState st = init_plant_state(cfg);
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  const long long steps =
      std::llround(days * seconds_per_day / cfg.run.dt);
  for (long long i = 0; i < steps; ++i) {
    const MonthlyForcing f = forcing_at(cfg.forcing, st.t);
    const double rate = snowfall_rate(st.t, cfg.run.snow_annual_m);
    step_plant(st, grid, f, cfg.thermal, rate, cfg.run.salinity_on, S);
  }
  return st;
}

}  // namespace

TEST_CASE("surface balance cold branch solves the quartic") {
  const Config cfg = default_config();
  const ThermalParams& p = cfg.thermal;
  const MonthlyForcing f = forcing_at(cfg.forcing, 0.0);
  const double h = 0.2;
  std::vector<double> T_s(25);
  for (std::size_t k = 0; k < T_s.size(); ++k) {
    T_s[k] = -20.0 - 10.0 * static_cast<double>(k) / 24.0;  // interface->surface
  }
  const SurfaceResult r =
      surface_balance(T_s, h, f, p, SurfaceLayer::snow);
  CHECK(r.T_surface < p.Tm1);
  CHECK(r.melt_rate == 0.0);
  CHECK(r.newton_iters <= 60);
  // Independent residual with the same one-sided gradient.
  const double deta = 1.0 / 24.0;
  const double grad =
      (3.0 * r.T_surface - 4.0 * T_s[23] + T_s[22]) / (2.0 * h * deta);
  const double res = atmospheric_flux(f) - p.I0 -
                     p.sigma * std::pow(r.T_surface + 273.0, 4) -
                     p.k_s * grad;
  CHECK(std::abs(res) < 1e-5);
}

TEST_CASE("surface balance melting branch scales the surplus by latent heat") {
  const ThermalParams p = default_thermal();
  // Uniform profile at the melting point kills the gradient term, so the
  // residual at Tm1 is exactly the extra forcing q_latent.
  const double TK = p.Tm1 + 273.0;
  MonthlyForcing f;
  f.F_L = p.I0 + p.sigma * TK * TK * TK * TK + p.q_latent;
  std::vector<double> T_i(41, p.Tm1);
  const SurfaceResult r = surface_balance(T_i, 3.0, f, p, SurfaceLayer::ice);
  CHECK(r.T_surface == p.Tm1);
  CHECK(r.melt_rate == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("snowfall deposits September through May") {
  const double annual = 0.3;
  const double rate_jan = snowfall_rate(0.0, annual);
  CHECK(rate_jan > 0.0);
  CHECK(rate_jan * 9.0 * seconds_per_month == doctest::Approx(annual));
  for (int m : {5, 6, 7}) {  // June, July, August
    CHECK(snowfall_rate((m + 0.5) * seconds_per_month, annual) == 0.0);
  }
  for (int m : {0, 4, 8, 11}) {
    CHECK(snowfall_rate((m + 0.5) * seconds_per_month, annual) ==
          doctest::Approx(rate_jan));
  }
  CHECK(snowfall_rate(0.25 * seconds_per_month + 3.0 * seconds_per_year,
                      annual) == doctest::Approx(rate_jan));
  CHECK(snowfall_rate(-0.5 * seconds_per_month, annual) ==
        doctest::Approx(rate_jan));  // December of the previous year
}

TEST_CASE("January initial state is flux-matched and balanced") {
  const Config cfg = default_config();
  const ThermalParams& p = cfg.thermal;
  const PlantState st = init_plant_state(cfg);
  REQUIRE(st.snow_active());
  REQUIRE(st.T_i.size() == static_cast<std::size_t>(cfg.run.N_i) + 1);
  REQUIRE(st.T_s.size() == static_cast<std::size_t>(cfg.run.N_s) + 1);
  const double T0 = st.T_i.front();
  CHECK(st.T_s.front() == T0);
  CHECK(T0 < -15.0);
  CHECK(T0 > -45.0);
  // Ice bottom carries the linear ramp's end value (the sine vanishes).
  CHECK(st.T_i.back() == doctest::Approx(p.Tm1).epsilon(1e-10));
  // Snow profile is linear: vanishing second differences.
  for (std::size_t k = 1; k + 1 < st.T_s.size(); ++k) {
    CHECK(std::abs(st.T_s[k + 1] - 2.0 * st.T_s[k] + st.T_s[k - 1]) < 1e-10);
  }
  // Surface value and quartic residual.
  const double slope = p.k0 * (p.Tm1 - T0) / (p.k_s * cfg.run.H0);
  CHECK(st.T_s.back() ==
        doctest::Approx(T0 - slope * cfg.run.h0).epsilon(1e-12));
  const double Fa = atmospheric_flux(forcing_at(cfg.forcing, 0.0));
  const double res = Fa - p.I0 -
                     p.sigma * std::pow(st.T_s.back() + 273.0, 4) +
                     p.k0 * (p.Tm1 - T0) / cfg.run.H0;
  CHECK(std::abs(res) < 1e-6);

  // Sub-threshold initial snow is carried as pending accumulation.
  Config thin = cfg;
  thin.run.h0 = 5e-4;
  const PlantState st2 = init_plant_state(thin);
  CHECK_FALSE(st2.snow_active());
  CHECK(st2.pending_snow == doctest::Approx(5e-4));
}

TEST_CASE("uniform freezing-point column with balanced fluxes is stationary") {
  Config cfg = default_config();
  cfg.thermal.I0 = 0.0;
  cfg.thermal.F_w = 0.0;
  const ThermalParams& p = cfg.thermal;
  const double TK = p.Tm2 + 273.0;
  for (auto& m : cfg.forcing.months) {
    m = MonthlyForcing{};
    m.F_L = p.sigma * TK * TK * TK * TK;
  }
  PlantState st;
  st.T_i.assign(static_cast<std::size_t>(cfg.run.N_i) + 1, p.Tm2);
  st.T_s.assign(static_cast<std::size_t>(cfg.run.N_s) + 1, p.Tm2);
  st.h = 0.1;
  st.H = 3.0;
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  for (int i = 0; i < 10; ++i) {
    const StepDiagnostics d =
        step_plant(st, grid, forcing_at(cfg.forcing, st.t), p, 0.0,
                   cfg.run.salinity_on, S);
    CHECK(std::abs(d.Hdot) < 1e-15);
    CHECK(d.melt_rate == 0.0);
  }
  for (double T : st.T_i) CHECK(std::abs(T - p.Tm2) < 1e-10);
  for (double T : st.T_s) CHECK(std::abs(T - p.Tm2) < 1e-10);
  CHECK(std::abs(st.H - 3.0) < 1e-12);
  CHECK(std::abs(st.h - 0.1) < 1e-12);
}

TEST_CASE("bottom growth follows the flux imbalance linearly") {
  Config cfg = default_config();
  cfg.run.salinity_on = false;
  cfg.thermal.I0 = 0.0;
  const ThermalParams& p = cfg.thermal;
  const GridConfig grid = grid_of(cfg);
  const MonthlyForcing f = forcing_at(cfg.forcing, 0.0);

  const auto step_linear = [&](double T_top, double F_w) {
    ThermalParams pp = p;
    pp.F_w = F_w;
    PlantState st;
    st.H = 3.0;
    st.T_i.resize(static_cast<std::size_t>(cfg.run.N_i) + 1);
    for (int j = 0; j <= cfg.run.N_i; ++j) {
      const double x = 3.0 * j / static_cast<double>(cfg.run.N_i);
      st.T_i[static_cast<std::size_t>(j)] = T_top + (p.Tm2 - T_top) * x / 3.0;
    }
    return step_plant(st, grid, f, pp, 0.0, false, {});
  };

  const double slope1 = (p.Tm2 + 10.0) / 3.0;  // T_top = -10
  const StepDiagnostics d1 = step_linear(-10.0, 0.0);
  CHECK(d1.Hdot ==
        doctest::Approx(p.k0 * slope1 / p.q_latent).epsilon(1e-9));
  const StepDiagnostics d2 = step_linear(-18.2, 0.0);
  CHECK(d2.Hdot == doctest::Approx(2.0 * d1.Hdot).epsilon(1e-6));
  const StepDiagnostics d3 = step_linear(-10.0, 2.0);
  CHECK(d3.Hdot ==
        doctest::Approx((p.k0 * slope1 - 2.0) / p.q_latent).epsilon(1e-9));
}

TEST_CASE("coupled steps keep interface flux continuity and the bottom pin") {
  const Config cfg = default_config();
  PlantState st = init_plant_state(cfg);
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  for (int i = 0; i < 50; ++i) {
    const StepDiagnostics d =
        step_plant(st, grid, forcing_at(cfg.forcing, st.t), cfg.thermal,
                   snowfall_rate(st.t, cfg.run.snow_annual_m),
                   cfg.run.salinity_on, S);
    CHECK(d.interface_flux_residual < 1e-8);
    CHECK(st.T_i.back() == cfg.thermal.Tm2);
    CHECK(st.T_i.front() == st.T_s.front());
  }
}

TEST_CASE("winter run respects the boundary-value envelope") {
  Config cfg = default_config();
  cfg.thermal.I0 = 0.0;  // no interior source: clean extremum bounds
  PlantState st = init_plant_state(cfg);
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  double lo = cfg.thermal.Tm2, hi = cfg.thermal.Tm2;
  for (double T : st.T_i) {
    lo = std::min(lo, T);
    hi = std::max(hi, T);
  }
  for (double T : st.T_s) {
    lo = std::min(lo, T);
    hi = std::max(hi, T);
  }
  const long long steps = std::llround(30.0 * seconds_per_day / cfg.run.dt);
  for (long long i = 0; i < steps; ++i) {
    const StepDiagnostics d =
        step_plant(st, grid, forcing_at(cfg.forcing, st.t), cfg.thermal,
                   snowfall_rate(st.t, cfg.run.snow_annual_m),
                   cfg.run.salinity_on, S);
    lo = std::min(lo, d.T_surface);
    hi = std::max(hi, d.T_surface);
    // Interface coupling uses one-sided stencils, so allow their small
    // non-monotone truncation.
    for (double T : st.T_i) {
      CHECK(T >= lo - 0.02);
      CHECK(T <= hi + 0.02);
    }
    for (double T : st.T_s) {
      CHECK(T >= lo - 0.02);
      CHECK(T <= hi + 0.02);
    }
  }
}

TEST_CASE("time and space refinement converge together") {
  const auto final_state = [](double dt, int N_i, int N_s) {
    Config cfg = default_config();
    cfg.run.dt = dt;
    cfg.run.N_i = N_i;
    cfg.run.N_s = N_s;
    return run_days(cfg, 20.0);
  };
  const PlantState a = final_state(600.0, 120, 24);
  const PlantState b = final_state(300.0, 240, 48);
  const PlantState c = final_state(150.0, 480, 96);
  const auto station_diff = [](const PlantState& u, const PlantState& v) {
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const double eta = static_cast<double>(k) / 10.0;
      const double Tu = interp_cubic_uniform(
          u.T_i, 0.0, 1.0 / (static_cast<double>(u.T_i.size()) - 1.0), eta);
      const double Tv = interp_cubic_uniform(
          v.T_i, 0.0, 1.0 / (static_cast<double>(v.T_i.size()) - 1.0), eta);
      worst = std::max(worst, std::abs(Tu - Tv));
    }
    return worst;
  };
  const double dT1 = station_diff(a, b);
  const double dT2 = station_diff(b, c);
  CHECK(dT1 < 0.5);
  CHECK(dT2 < dT1);
  CHECK(dT1 / dT2 > 1.5);
  CHECK(dT1 / dT2 < 6.0);
  const double dH1 = std::abs(a.H - b.H);
  const double dH2 = std::abs(b.H - c.H);
  if (dH1 > 1e-9) {
    CHECK(dH1 / dH2 > 1.5);
    CHECK(dH1 / dH2 < 6.0);
  }
}

TEST_CASE("stronger ocean flux thins the ice") {
  Config cfg = default_config();
  cfg.run.years = 1;
  const double H_weak = run_annual(cfg).final_state.H;
  cfg.thermal.F_w = 6.0;
  const double H_strong = run_annual(cfg).final_state.H;
  CHECK(H_strong < H_weak - 0.05);
}

TEST_CASE("extreme ocean flux melts the column out") {
  Config cfg = default_config();
  cfg.run.years = 1;
  cfg.thermal.F_w = 5000.0;
  CHECK_THROWS_AS(run_annual(cfg), IceVanishedError);
}

TEST_CASE("zero-year run echoes the initial state") {
  Config cfg = default_config();
  cfg.run.years = 0;
  const AnnualSeries s = run_annual(cfg);
  REQUIRE(s.samples.size() == 1);
  CHECK(s.samples[0].t == 0.0);
  CHECK(s.samples[0].H == doctest::Approx(cfg.run.H0));
  CHECK(s.final_state.H == doctest::Approx(cfg.run.H0));
}

TEST_CASE("half-implicit weights enforce the stability bound") {
  Config cfg = default_config();
  cfg.run.theta = 0.5;
  PlantState st = init_plant_state(cfg);
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  // dt = 600 s in a 10 cm snow layer violates the explicit-part bound.
  CHECK_THROWS_AS(step_plant(st, grid, forcing_at(cfg.forcing, 0.0),
                             cfg.thermal,
                             snowfall_rate(0.0, cfg.run.snow_annual_m),
                             cfg.run.salinity_on, S),
                  SolverError);

  Config small = default_config();
  small.run.theta = 0.5;
  small.run.dt = 5.0;
  small.run.N_i = 40;
  small.run.N_s = 8;
  PlantState st2 = init_plant_state(small);
  const GridConfig grid2 = grid_of(small);
  const std::vector<double> S2 = salinity_of(small);
  for (int i = 0; i < 20; ++i) {
    CHECK_NOTHROW(step_plant(st2, grid2, forcing_at(small.forcing, st2.t),
                             small.thermal,
                             snowfall_rate(st2.t, small.run.snow_annual_m),
                             small.run.salinity_on, S2));
  }
}

TEST_CASE("snow layer activates from accumulated fall") {
  Config cfg = default_config();
  cfg.run.h0 = 0.0;
  PlantState st = init_plant_state(cfg);
  CHECK_FALSE(st.snow_active());
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  for (int i = 0; i < 150; ++i) {
    step_plant(st, grid, forcing_at(cfg.forcing, st.t), cfg.thermal,
               snowfall_rate(st.t, cfg.run.snow_annual_m),
               cfg.run.salinity_on, S);
  }
  REQUIRE(st.snow_active());
  CHECK(st.h >= snow_min_depth);
  CHECK(st.h < 2e-3);
  CHECK(st.pending_snow == 0.0);
  CHECK(st.T_s.size() == static_cast<std::size_t>(cfg.run.N_s) + 1);
}

TEST_CASE("melting drops thin snow and then ablates bare ice") {
  Config cfg = default_config();
  const ThermalParams& p = cfg.thermal;
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  MonthlyForcing hot;
  hot.F_L = 500.0;
  PlantState st;
  st.H = 2.0;
  st.h = 1.05e-3;
  st.T_i.assign(static_cast<std::size_t>(cfg.run.N_i) + 1, -0.15);
  st.T_i.back() = p.Tm2;
  st.T_s.assign(static_cast<std::size_t>(cfg.run.N_s) + 1, -0.105);
  StepDiagnostics d =
      step_plant(st, grid, hot, p, 0.0, cfg.run.salinity_on, S);
  CHECK(d.melt_rate < 0.0);
  CHECK(d.T_surface == p.Tm1);
  CHECK_FALSE(st.snow_active());
  CHECK(st.h == 0.0);
  const double H_after_drop = st.H;
  for (int i = 0; i < 50; ++i) {
    d = step_plant(st, grid, hot, p, 0.0, cfg.run.salinity_on, S);
    CHECK(d.T_surface == p.Tm1);
  }
  CHECK(st.H < H_after_drop - 0.005);
}

TEST_CASE("snow-melt deficit continues into the ice top") {
  Config cfg = default_config();
  const ThermalParams& p = cfg.thermal;
  const GridConfig grid = grid_of(cfg);
  const std::vector<double> S = salinity_of(cfg);
  MonthlyForcing hot;
  hot.F_L = 1500.0;
  PlantState st;
  st.H = 2.0;
  st.h = 1.0e-3;
  st.T_i.assign(static_cast<std::size_t>(cfg.run.N_i) + 1, -0.15);
  st.T_i.back() = p.Tm2;
  st.T_s.assign(static_cast<std::size_t>(cfg.run.N_s) + 1, -0.105);
  const double H_before = st.H;
  const StepDiagnostics d =
      step_plant(st, grid, hot, p, 0.0, cfg.run.salinity_on, S);
  CHECK_FALSE(st.snow_active());
  // The step removed more snow than was present; the deficit came off the
  // ice (bottom growth over one step is orders of magnitude smaller).
  CHECK(st.H < H_before - 2e-4);
  CHECK(d.Hdot < 0.0);
}

TEST_CASE("measurements expose thickness and top temperature") {
  const Config cfg = default_config();
  const PlantState st = init_plant_state(cfg);
  const Measurements m = measure(st);
  CHECK(m.Y1 == st.H);
  CHECK(m.Y2 == st.T_i.front());
}

TEST_CASE("grid mismatch is rejected") {
  const Config cfg = default_config();
  PlantState st = init_plant_state(cfg);
  st.T_i.resize(50);
  const GridConfig grid = grid_of(cfg);
  CHECK_THROWS_AS(step_plant(st, grid, forcing_at(cfg.forcing, 0.0),
                             cfg.thermal, 0.0, false, {}),
                  SolverError);
}
