#include "icestate/plant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "icestate/errors.hpp"
#include "icestate/numerics.hpp"

namespace icestate {

namespace {

// Root of a strictly decreasing g on (-273, T_hi], where the caller has
// already established g(T_hi) < 0: Newton steps kept inside a shrinking
// bracket, bisection whenever Newton leaves it.
template <typename F, typename DF>
double cold_root(const F& g, const DF& dg, double T_hi, double guess,
                 int* iters_out) {
  double hi = T_hi;
  double lo = std::min(-150.0, T_hi - 50.0);
  if (!(g(lo) > 0.0)) {
    // Extreme forcing: fall back to just above absolute zero, where the
    // radiative term vanishes and the conductive term dominates.
    lo = -272.9;
    if (!(g(lo) > 0.0)) {
      throw SolverError("surface balance: no physical root");
    }
  }
  double T = std::clamp(guess, lo, hi);
  int iters = 0;
  for (; iters < 80; ++iters) {
    const double val = g(T);
    if (val > 0.0) {
      lo = T;
    } else {
      hi = T;
    }
    const double der = dg(T);
    double Tn = (der != 0.0) ? T - val / der : T;
    if (!(Tn > lo) || !(Tn < hi)) Tn = 0.5 * (lo + hi);
    const double move = std::abs(Tn - T);
    T = Tn;
    if (move < 1e-11) break;
  }
  if (iters_out) *iters_out = iters + 1;
  return T;
}

// Wraps t into [0, year) including negative times.
double wrap_year(double t) {
  double tw = std::fmod(t, seconds_per_year);
  if (tw < 0.0) tw += seconds_per_year;
  return tw;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

SurfaceResult surface_balance(const std::vector<double>& profile,
                              double thickness, const MonthlyForcing& forcing,
                              const ThermalParams& params, SurfaceLayer layer) {
  if (profile.size() < 3) {
    throw SolverError("surface_balance: need at least 3 profile nodes");
  }
  if (!(thickness > 0.0)) {
    throw SolverError("surface_balance: nonpositive layer thickness");
  }
  const double Fa = atmospheric_flux(forcing);
  const std::size_t N = profile.size() - 1;
  const double deta = 1.0 / static_cast<double>(N);
  // The conductive term k*dT/dx at the exposed surface is affine in the
  // unknown surface value:  k*dT/dx = C_grad - G*T  with G > 0.
  double G, C_grad, guess;
  if (layer == SurfaceLayer::snow) {
    // Snow nodes run interface -> surface; x = -eta*h.
    const double denom = 2.0 * thickness * deta;
    G = 3.0 * params.k_s / denom;
    C_grad = params.k_s * (4.0 * profile[N - 1] - profile[N - 2]) / denom;
    guess = profile[N];
  } else {
    // Bare ice: nodes run top -> bottom; x = +eta*H.
    const double denom = 2.0 * thickness * deta;
    G = 3.0 * params.k0 / denom;
    C_grad = params.k0 * (4.0 * profile[1] - profile[2]) / denom;
    guess = profile[0];
  }
  const double C = Fa - params.I0 + C_grad;
  const auto g = [&](double T) {
    const double TK = T + 273.0;
    return C - G * T - params.sigma * TK * TK * TK * TK;
  };
  const auto dg = [&](double T) {
    const double TK = T + 273.0;
    return -G - 4.0 * params.sigma * TK * TK * TK;
  };
  SurfaceResult out;
  const double surplus = g(params.Tm1);
  if (surplus >= 0.0) {
    // Melting branch (g decreasing, so the root sits at or above Tm1):
    // surface pinned at Tm1, the surplus ablates the layer.
    out.T_surface = params.Tm1;
    out.melt_rate = -surplus / params.q_latent;
    out.newton_iters = 1;
  } else {
    out.T_surface = cold_root(g, dg, params.Tm1, std::min(guess, params.Tm1),
                              &out.newton_iters);
    out.melt_rate = 0.0;
  }
  return out;
}

std::vector<double> salinity_profile(int N_i, const SalinityParams& sal) {
  if (N_i < 2) throw ConfigError("salinity_profile: N_i must be >= 2");
  std::vector<double> S(static_cast<std::size_t>(N_i) + 1);
  for (int j = 0; j <= N_i; ++j) {
    const double r = static_cast<double>(j) / static_cast<double>(N_i);
    S[static_cast<std::size_t>(j)] = salinity(r, 1.0, sal);
  }
  return S;
}

IceOperator ice_operator_coeffs(const std::vector<double>& T_old, double H_new,
                                double Hdot, double a_dot,
                                const ThermalParams& params, bool salinity_on,
                                const std::vector<double>& S_eta,
                                double source_amp) {
  const std::size_t nodes = T_old.size();
  if (nodes < 3) throw SolverError("ice_operator_coeffs: need >= 3 nodes");
  if (!(H_new > 0.0)) throw SolverError("ice_operator_coeffs: H <= 0");
  if (salinity_on && S_eta.size() != nodes) {
    throw SolverError("ice_operator_coeffs: salinity profile size mismatch");
  }
  const double N = static_cast<double>(nodes - 1);
  const double H2 = H_new * H_new;
  // Coefficients freeze at the old profile; the clamp keeps the brine terms
  // away from their T -> 0 singularity.
  const double T_clamp = params.Tm2 / 2.0;
  IceOperator op;
  op.diff_eta.resize(nodes);
  op.vel.resize(nodes);
  op.src.resize(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double eta = static_cast<double>(j) / N;
    const double x = eta * H_new;
    op.vel[j] = (eta * Hdot + a_dot) / H_new;
    const double atten = params.kappa_i * std::exp(-params.kappa_i * x);
    if (salinity_on) {
      const double Tc = std::min(T_old[j], T_clamp);
      const double c_i = heat_capacity(Tc, S_eta[j], params);
      const double k_i = thermal_conductivity(Tc, S_eta[j], params);
      op.diff_eta[j] = k_i / (params.rho * c_i) / H2;
      op.src[j] = source_amp * (params.c0 / c_i) * atten;
    } else {
      op.diff_eta[j] = params.D_i() / H2;
      op.src[j] = source_amp * atten;
    }
  }
  return op;
}

double snowfall_rate(double t, double annual_depth) {
  if (annual_depth <= 0.0) return 0.0;
  const double tw = wrap_year(t);
  int month = static_cast<int>(tw / seconds_per_month);
  month = std::clamp(month, 0, 11);
  if (month >= 5 && month <= 7) return 0.0;  // June, July, August
  return annual_depth / (9.0 * seconds_per_month);
}

Measurements measure(const PlantState& state) {
  if (state.T_i.empty()) throw SolverError("measure: empty state");
  return Measurements{state.H, state.T_i.front()};
}

StepDiagnostics step_plant(PlantState& state, const GridConfig& grid,
                           const MonthlyForcing& forcing,
                           const ThermalParams& params, double snow_rate,
                           bool salinity_on, const std::vector<double>& S_eta) {
  const double dt = grid.dt;
  if (!(dt > 0.0)) throw SolverError("step_plant: dt must be positive");
  if (state.T_i.size() != static_cast<std::size_t>(grid.N_i) + 1) {
    throw SolverError("step_plant: ice profile does not match the grid");
  }
  const bool snow = state.snow_active();
  if (snow && state.T_s.size() != static_cast<std::size_t>(grid.N_s) + 1) {
    throw SolverError("step_plant: snow profile does not match the grid");
  }
  if (!(state.H > 0.0)) throw IceVanishedError("step_plant: H <= 0");

  StepDiagnostics diag;

  // Boundary rates from the old profiles.
  SurfaceResult sr;
  double hdot_raw = 0.0;
  if (snow) {
    sr = surface_balance(state.T_s, state.h, forcing, params,
                         SurfaceLayer::snow);
    hdot_raw = snow_rate + sr.melt_rate;
  } else {
    sr = surface_balance(state.T_i, state.H, forcing, params,
                         SurfaceLayer::ice);
  }
  diag.T_surface = sr.T_surface;
  diag.melt_rate = sr.melt_rate;
  diag.newton_iters = sr.newton_iters;

  // Bottom growth rate (Stefan balance) from the old gradient.
  const double dx_i = state.H / static_cast<double>(grid.N_i);
  const double grad_bot = edge_gradient_end(state.T_i, dx_i);
  const double k_bot =
      salinity_on ? thermal_conductivity(params.Tm2, S_eta.back(), params)
                  : params.k0;
  const double Hdot_bottom = (k_bot * grad_bot - params.F_w) / params.q_latent;

  // Thickness bookkeeping; surface melt burns pending snow before ice.
  const double H_old = state.H;
  const double h_old = state.h;
  double melt_ice_top = 0.0;
  double h_new = h_old;
  bool snow_after = snow;
  if (snow) {
    const double h_raw = h_old + dt * hdot_raw;
    if (h_raw < snow_min_depth) {
      // Layer vanishes; any deficit continues into the ice top.
      melt_ice_top = std::max(0.0, -h_raw);
      h_new = 0.0;
      snow_after = false;
    } else {
      h_new = h_raw;
    }
  } else {
    state.pending_snow += snow_rate * dt;
    double melt_depth = -sr.melt_rate * dt;
    const double from_pending = std::min(state.pending_snow, melt_depth);
    state.pending_snow -= from_pending;
    melt_depth -= from_pending;
    melt_ice_top = melt_depth;
  }
  double H_new = H_old + dt * Hdot_bottom - melt_ice_top;
  if (!(H_new > 0.0)) {
    throw IceVanishedError("step_plant: ice thickness reached zero");
  }
  const double a_dot = melt_ice_top / dt;
  const double Hdot_used = (H_new - H_old) / dt;
  const double hdot_used = (h_new - h_old) / dt;
  diag.Hdot = Hdot_used;
  diag.hdot = hdot_used;

  // Implicit solves on the new geometry, coefficients from the old state.
  const IceOperator iop =
      ice_operator_coeffs(state.T_i, H_new, Hdot_used, a_dot, params,
                          salinity_on, S_eta, params.Ibar0());
  if (snow_after) {
    const std::size_t ns = state.T_s.size();
    const double de_s =
        params.k_s / (params.rho_s * params.c0) / (h_new * h_new);
    std::vector<double> de(ns, de_s), vs(ns), zero(ns, 0.0);
    const double Nsd = static_cast<double>(ns - 1);
    for (std::size_t k = 0; k < ns; ++k) {
      vs[k] = (static_cast<double>(k) / Nsd) * hdot_used / h_new;
    }
    const AffineProfile ice = step_dirichlet_affine(
        state.T_i, iop.diff_eta, iop.vel, iop.src, params.Tm2, dt, grid.theta);
    const AffineProfile sno = step_dirichlet_affine(
        state.T_s, de, vs, zero, sr.T_surface, dt, grid.theta);
    // Flux continuity at the interface, second order on both sides, picks
    // the shared boundary value:  A*T_int + B = 0.
    const double cs = params.k_s / (2.0 * h_new / Nsd);
    const double ci = params.k0 / (2.0 * H_new / static_cast<double>(grid.N_i));
    const double A = cs * (3.0 - 4.0 * sno.coef[1] + sno.coef[2]) +
                     ci * (3.0 - 4.0 * ice.coef[1] + ice.coef[2]);
    const double B = cs * (-4.0 * sno.base[1] + sno.base[2]) -
                     ci * (4.0 * ice.base[1] - ice.base[2]);
    if (!(std::abs(A) > 1e-300)) {
      throw SolverError("step_plant: singular interface coupling");
    }
    const double T_int = -B / A;
    for (std::size_t j = 0; j < state.T_i.size(); ++j) {
      state.T_i[j] = ice.base[j] + ice.coef[j] * T_int;
    }
    for (std::size_t k = 0; k < ns; ++k) {
      state.T_s[k] = sno.base[k] + sno.coef[k] * T_int;
    }
    const double flux_s =
        cs * (3.0 * state.T_s[0] - 4.0 * state.T_s[1] + state.T_s[2]);
    const double flux_i =
        ci * (-3.0 * state.T_i[0] + 4.0 * state.T_i[1] - state.T_i[2]);
    diag.interface_flux_residual = std::abs(flux_s - flux_i);
  } else {
    state.T_i = step_dirichlet(state.T_i, iop.diff_eta, iop.vel, iop.src,
                               sr.T_surface, params.Tm2, dt, grid.theta);
    state.T_s.clear();
  }

  state.H = H_new;
  state.h = h_new;
  state.t += dt;

  // A fresh layer seeds uniformly at the ice-top temperature.
  if (!snow_after && state.pending_snow >= snow_min_depth) {
    state.T_s.assign(static_cast<std::size_t>(grid.N_s) + 1,
                     state.T_i.front());
    state.h = state.pending_snow;
    state.pending_snow = 0.0;
  }

  if (!all_finite(state.T_i) || !all_finite(state.T_s) ||
      !std::isfinite(state.H) || !std::isfinite(state.h)) {
    throw SolverError("step_plant: non-finite state");
  }
  return diag;
}

PlantState init_plant_state(const Config& cfg) {
  const ThermalParams& p = cfg.thermal;
  const RunSettings& run = cfg.run;
  const double H0 = run.H0;
  const double h0 = run.h0;
  const bool snow = h0 >= snow_min_depth;
  const MonthlyForcing f0 = forcing_at(cfg.forcing, 0.0);
  const double Fa = atmospheric_flux(f0);
  // Interface value T0 solves the surface balance with both layers linear
  // and flux-matched; the snow gradient is then k0*(Tm1-T0)/(k_s*H0) and
  // the conductive term reduces to k0*(Tm1-T0)/H0 either way.
  const double lift = snow ? p.k0 * h0 / (p.k_s * H0) : 0.0;
  const auto g = [&](double T0) {
    const double T_surf = T0 - lift * (p.Tm1 - T0);
    const double TK = T_surf + 273.0;
    return Fa - p.I0 - p.sigma * TK * TK * TK * TK + p.k0 * (p.Tm1 - T0) / H0;
  };
  const auto dg = [&](double T0) {
    const double T_surf = T0 - lift * (p.Tm1 - T0);
    const double TK = T_surf + 273.0;
    return -4.0 * p.sigma * TK * TK * TK * (1.0 + lift) - p.k0 / H0;
  };
  const double T0 = (g(p.Tm1) >= 0.0)
                        ? p.Tm1
                        : cold_root(g, dg, p.Tm1, -25.0, nullptr);

  PlantState st;
  st.H = H0;
  st.t = 0.0;
  st.T_i.resize(static_cast<std::size_t>(run.N_i) + 1);
  const double Nd = static_cast<double>(run.N_i);
  for (int j = 0; j <= run.N_i; ++j) {
    const double x = (static_cast<double>(j) / Nd) * H0;
    st.T_i[static_cast<std::size_t>(j)] =
        (p.Tm1 - T0) * x / H0 + T0 +
        run.sine_amp * std::sin(4.0 * M_PI * x / H0);
  }
  if (snow) {
    st.h = h0;
    st.T_s.resize(static_cast<std::size_t>(run.N_s) + 1);
    const double slope = p.k0 * (p.Tm1 - T0) / (p.k_s * H0);  // dT/dx
    const double Nsd = static_cast<double>(run.N_s);
    for (int k = 0; k <= run.N_s; ++k) {
      const double x = -(static_cast<double>(k) / Nsd) * h0;
      st.T_s[static_cast<std::size_t>(k)] = T0 + slope * x;
    }
  } else {
    st.h = 0.0;
    st.pending_snow = h0;
  }
  return st;
}

AnnualSeries run_annual(const Config& cfg) {
  cfg.validate();
  const RunSettings& run = cfg.run;
  GridConfig grid{run.N_s, run.N_i, run.dt, run.theta};
  AnnualSeries out;
  PlantState state = init_plant_state(cfg);
  const std::vector<double> S_eta =
      run.salinity_on ? salinity_profile(run.N_i, cfg.salinity)
                      : std::vector<double>{};
  const long long steps = std::llround(
      static_cast<double>(run.years) * seconds_per_year / run.dt);
  const double deta = 1.0 / static_cast<double>(run.N_i);

  double last_T_surface =
      state.snow_active() ? state.T_s.back() : state.T_i.front();
  const auto sample = [&]() {
    AnnualSample s;
    s.t = state.t;
    s.h = state.snow_active() ? state.h : 0.0;
    s.H = state.H;
    s.T_surface = last_T_surface;
    for (int k = 0; k <= 10; ++k) {
      s.T_eta[static_cast<std::size_t>(k)] = interp_cubic_uniform(
          state.T_i, 0.0, deta, static_cast<double>(k) / 10.0);
    }
    out.samples.push_back(s);
  };

  out.max_H = state.H;
  sample();
  for (long long i = 0; i < steps; ++i) {
    const MonthlyForcing f = forcing_at(cfg.forcing, state.t);
    const double rate = snowfall_rate(state.t, run.snow_annual_m);
    const StepDiagnostics d = step_plant(state, grid, f, cfg.thermal, rate,
                                         run.salinity_on, S_eta);
    last_T_surface = d.T_surface;
    out.max_H = std::max(out.max_H, state.H);
    out.max_abs_Hdot = std::max(out.max_abs_Hdot, std::abs(d.Hdot));
    if ((i + 1) % run.sample_stride == 0 || i + 1 == steps) sample();
  }
  out.H_bound_ok = out.max_H <= run.H_bar;
  out.Hdot_bound_ok = out.max_abs_Hdot <= run.M_bound;
  out.final_state = std::move(state);
  return out;
}

}  // namespace icestate
