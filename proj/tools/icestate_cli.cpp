#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icestate/config.hpp"
#include "icestate/experiments.hpp"

using namespace icestate;

int main(int argc, char** argv) {
  CLI::App app{
      "icestate: moving-boundary snow/sea-ice thermodynamics with a "
      "backstepping temperature-profile estimator"};
  app.require_subcommand(1);

  std::string config_path;
  OutputOptions out;
  int years = 0;
  double days = 0.0, lambda = 0.0, c_par = 0.0, epsilon = 0.0;
  double noise_y1 = 0.0, noise_y2 = 0.0;
  unsigned long seed = 0;
  bool open_loop = false, matched_init = false, no_salinity = false;
  bool interp_forcing = false;
  std::vector<double> lambdas{5e-7, 5e-6, 1e-5};

  const auto add_io = [&](CLI::App* s) {
    s->add_option("--config", config_path,
                  "Config file (sectioned key=value)")
        ->check(CLI::ExistingFile);
    s->add_option("--out", out.out_dir, "Output directory (default: out)");
    s->add_flag("--gnuplot", out.gnuplot,
                "Also write gnuplot companion scripts");
    s->add_flag("--interp-forcing", interp_forcing,
                "Blend monthly forcing about month midpoints");
    s->add_option("--seed", seed, "RNG seed for measurement noise");
  };
  const auto add_gains = [&](CLI::App* s) {
    s->add_option("--lambda", lambda, "Decay design parameter, 1/s");
    s->add_option("--c", c_par, "Thickness-gain parameter, 1/s");
    s->add_option("--epsilon", epsilon, "Boundary-gain parameter");
  };
  const auto add_scenario = [&](CLI::App* s) {
    s->add_option("--days", days, "Estimation horizon, days");
    s->add_flag("--matched-init", matched_init,
                "Start the estimator from the true profile");
    s->add_flag("--no-salinity", no_salinity,
                "Salinity-free plant coefficients");
    s->add_option("--noise-y1", noise_y1,
                  "Thickness measurement noise std dev, m");
    s->add_option("--noise-y2", noise_y2,
                  "Surface temperature noise std dev, C");
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "Seasonal snow and ice thickness cycle");
  add_io(sim);
  sim->add_option("--years", years, "Simulated years");
  sim->add_flag("--no-salinity", no_salinity,
                "Salinity-free plant coefficients");

  CLI::App* est = app.add_subcommand(
      "estimate", "January estimation scenario, truth vs estimator");
  add_io(est);
  add_gains(est);
  add_scenario(est);
  est->add_flag("--open-loop", open_loop, "Zero all injection gains");

  CLI::App* cmp = app.add_subcommand(
      "compare", "Injection on vs off from identical initial data");
  add_io(cmp);
  add_gains(cmp);
  add_scenario(cmp);

  CLI::App* swp = app.add_subcommand(
      "sweep", "Closed-loop runs across decay parameters");
  add_io(swp);
  add_gains(swp);
  add_scenario(swp);
  swp->add_option("--lambdas", lambdas, "Decay parameters to sweep")
      ->delimiter(',');

  CLI::App* kch = app.add_subcommand(
      "kernels-check", "Gain-kernel residual and transform tables");
  add_io(kch);
  add_gains(kch);

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    CLI::App* sub = app.get_subcommands().front();
    const auto given = [&](const std::string& name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--years")) cfg.run.years = years;
    if (given("--days")) cfg.run.days = days;
    if (given("--lambda")) cfg.run.lambda = lambda;
    if (given("--c")) cfg.run.c = c_par;
    if (given("--epsilon")) cfg.run.epsilon = epsilon;
    if (given("--seed")) cfg.run.seed = seed;
    if (given("--noise-y1")) cfg.run.noise_y1 = noise_y1;
    if (given("--noise-y2")) cfg.run.noise_y2 = noise_y2;
    if (given("--open-loop")) cfg.run.open_loop = open_loop;
    if (given("--matched-init")) cfg.run.matched_init = matched_init;
    if (given("--no-salinity")) cfg.run.salinity_on = !no_salinity;
    if (given("--interp-forcing")) cfg.run.interp_forcing = interp_forcing;
    if (cfg.run.interp_forcing) {
      cfg.forcing.lookup_mode = ForcingLookup::linear_midpoint;
    }
    cfg.validate();

    if (sub == sim) return cmd_simulate(cfg, out);
    if (sub == est) return cmd_estimate(cfg, out);
    if (sub == cmp) return cmd_compare(cfg, out);
    if (sub == swp) return cmd_sweep(cfg, lambdas, out);
    if (sub == kch) return cmd_kernels_check(cfg, out);
    std::fprintf(stderr, "error: unreachable subcommand dispatch\n");
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
