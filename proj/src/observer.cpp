#include "icestate/observer.hpp"

#include <algorithm>
#include <cmath>

#include "icestate/errors.hpp"
#include "icestate/numerics.hpp"

namespace icestate {

void ObserverConfig::validate() const {
  gains.validate();
  params.validate();
  if (!(Ibar0 >= 0.0) || !std::isfinite(Ibar0)) {
    throw ConfigError("invariant violated: observer Ibar0 >= 0");
  }
  if (N < 2) throw ConfigError("invariant violated: observer N >= 2");
  if (!(dt > 0.0)) throw ConfigError("invariant violated: observer dt > 0");
  if (!(theta >= 0.5) || !(theta <= 1.0)) {
    throw ConfigError("invariant violated: observer theta in [0.5, 1]");
  }
}

ObserverConfig make_observer_config(const Config& cfg) {
  ObserverConfig oc;
  oc.gains = GainParams{cfg.run.lambda, cfg.run.c, cfg.run.epsilon,
                        cfg.thermal.D_i(), cfg.thermal.beta()};
  oc.params = cfg.thermal;
  oc.Ibar0 = cfg.run.Ibar0 ? *cfg.run.Ibar0 : cfg.thermal.Ibar0();
  oc.N = cfg.run.N_i;
  oc.dt = cfg.run.dt;
  oc.theta = cfg.run.theta;
  oc.open_loop = cfg.run.open_loop;
  oc.validate();
  return oc;
}

ObserverState init_observer(const ObserverConfig& oc, const Measurements& m0,
                            double d) {
  if (!(d >= 0.0) || !(d < 0.5)) {
    throw ConfigError("invariant violated: observer shape d in [0, 1/2)");
  }
  if (!(m0.Y1 > 0.0)) {
    throw SolverError("init_observer: nonpositive thickness measurement");
  }
  ObserverState st;
  st.H_hat = m0.Y1;
  st.domain = m0.Y1;
  st.t = 0.0;
  st.T_hat.resize(static_cast<std::size_t>(oc.N) + 1);
  // Parabola through (0, Y2) and (Y1, Tm1) with its minimum at x = d*Y1.
  const double H0 = m0.Y1;
  const double amp =
      (oc.params.Tm1 - m0.Y2) / (H0 * H0 * (1.0 - 2.0 * d));
  const double Nd = static_cast<double>(oc.N);
  for (int j = 0; j <= oc.N; ++j) {
    const double x = (static_cast<double>(j) / Nd) * H0;
    const double shift = x - d * H0;
    st.T_hat[static_cast<std::size_t>(j)] =
        amp * (shift * shift - d * d * H0 * H0) + m0.Y2;
  }
  return st;
}

ObserverState init_observer_matched(const ObserverConfig& oc,
                                    const PlantState& plant) {
  if (plant.T_i.size() != static_cast<std::size_t>(oc.N) + 1) {
    throw SolverError("init_observer_matched: grid mismatch with the plant");
  }
  ObserverState st;
  st.T_hat = plant.T_i;
  st.H_hat = plant.H;
  st.domain = plant.H;
  st.t = plant.t;
  return st;
}

void step_observer(ObserverState& st, const ObserverConfig& oc,
                   const Measurements& m_new) {
  const double Y1 = m_new.Y1;
  if (!(Y1 > 0.0)) {
    throw SolverError("step_observer: nonpositive thickness measurement");
  }
  if (st.T_hat.size() != static_cast<std::size_t>(oc.N) + 1) {
    throw SolverError("step_observer: profile does not match the grid");
  }
  const double dt = oc.dt;
  // Innovation at the step's start: st.domain is the previous thickness
  // measurement, so both operands live at the same time level.  Comparing
  // H_hat against the new measurement instead would leave a persistent
  // Hdot*dt residue that the gains amplify into a standing profile bias.
  const double e = oc.open_loop ? 0.0 : (st.domain - st.H_hat);
  GainEvaluation gv{};
  if (!oc.open_loop) gv = gains(st.domain, oc.gains, oc.N);

  // Thickness update first, from the old profile's boundary gradient.
  const double dx_old = st.domain / static_cast<double>(oc.N);
  const double grad = edge_gradient_end(st.T_hat, dx_old);
  const double H_hat_new =
      st.H_hat + dt * (gv.p4 * e + oc.gains.beta * grad -
                       oc.params.F_w / oc.params.q_latent);

  // Profile step on the newly measured domain.
  const double Ydot = (Y1 - st.domain) / dt;
  IceOperator op = ice_operator_coeffs(st.T_hat, Y1, Ydot, 0.0, oc.params,
                                       /*salinity_on=*/false, {}, oc.Ibar0);
  if (!oc.open_loop) {
    for (std::size_t j = 0; j < op.src.size(); ++j) {
      op.src[j] -= gv.p1[j] * e;
    }
  }
  const double bc0 = m_new.Y2;  // p2 = 0
  const double bc1 = oc.params.Tm2 - gv.p3 * e;
  st.T_hat = step_dirichlet(st.T_hat, op.diff_eta, op.vel, op.src, bc0, bc1,
                            dt, oc.theta);
  st.H_hat = H_hat_new;
  st.domain = Y1;
  st.t += dt;
  for (double v : st.T_hat) {
    if (!std::isfinite(v)) throw SolverError("step_observer: non-finite state");
  }
  if (!std::isfinite(st.H_hat)) {
    throw SolverError("step_observer: non-finite thickness estimate");
  }
}

namespace {

// Profile error -(T - T_hat) sampled on n+1 nodes over the common domain.
struct CommonError {
  std::vector<double> T_tilde;
  double L;
};

CommonError common_error(const PlantState& plant, const ObserverState& obs) {
  if (plant.T_i.empty() || obs.T_hat.empty()) {
    throw SolverError("error_diagnostics: empty profile");
  }
  CommonError out;
  out.L = std::min(plant.H, obs.domain);
  const std::size_t n = obs.T_hat.size() - 1;
  const double dxp = plant.H / (static_cast<double>(plant.T_i.size()) - 1.0);
  const double dxo = obs.domain / static_cast<double>(n);
  out.T_tilde.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double x =
        out.L * static_cast<double>(j) / static_cast<double>(n);
    const double T = interp_cubic_uniform(plant.T_i, 0.0, dxp, x);
    const double That = interp_cubic_uniform(obs.T_hat, 0.0, dxo, x);
    out.T_tilde[j] = -(T - That);
  }
  return out;
}

}  // namespace

ErrorDiagnostics error_diagnostics(const PlantState& plant,
                                   const ObserverState& obs) {
  const CommonError ce = common_error(plant, obs);
  ErrorDiagnostics out;
  out.H_tilde = plant.H - obs.H_hat;
  std::vector<double> sq(ce.T_tilde.size());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    sq[j] = ce.T_tilde[j] * ce.T_tilde[j];
    out.Linf = std::max(out.Linf, std::abs(ce.T_tilde[j]));
  }
  const double dx = ce.L / (static_cast<double>(sq.size()) - 1.0);
  out.Phi = trapezoid(sq, dx) + out.H_tilde * out.H_tilde;
  return out;
}

std::vector<double> target_profile(const PlantState& plant,
                                   const ObserverState& obs,
                                   const GainParams& g, QuadRule rule) {
  const CommonError ce = common_error(plant, obs);
  return to_target(ce.T_tilde, plant.H - obs.H_hat, ce.L, g, rule);
}

double fitted_decay_rate(const std::vector<double>& t,
                         const std::vector<double>& v, double skip_fraction) {
  if (t.size() != v.size() || t.size() < 3) {
    throw std::invalid_argument("fitted_decay_rate: need >= 3 samples");
  }
  if (!(skip_fraction >= 0.0) || !(skip_fraction < 1.0)) {
    throw std::invalid_argument("fitted_decay_rate: skip fraction in [0,1)");
  }
  const std::size_t first =
      static_cast<std::size_t>(skip_fraction * static_cast<double>(t.size()));
  std::vector<double> ts, ln_v;
  for (std::size_t i = first; i < t.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw std::invalid_argument(
          "fitted_decay_rate: nonpositive value in the fitted range");
    }
    ts.push_back(t[i]);
    ln_v.push_back(std::log(v[i]));
  }
  if (ts.size() < 2) {
    throw std::invalid_argument("fitted_decay_rate: fitted range too short");
  }
  return -lsq_slope(ts, ln_v);
}

}  // namespace icestate
