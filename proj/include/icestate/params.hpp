#pragma once

#include <array>
#include <optional>

namespace icestate {

// The model year is 365 days split into twelve equal months; the clock
// starts at midnight January 1.
inline constexpr double seconds_per_day = 86400.0;
inline constexpr double seconds_per_year = 365.0 * seconds_per_day;
inline constexpr double seconds_per_month = seconds_per_year / 12.0;

// Physical constants of the snow/ice column.  Defaults are the standard
// monthly-climatology parameter set; q_latent and F_w are not part of that
// table and carry documented defaults (see README).
struct ThermalParams {
  double sigma = 5.670e-8;  // Stefan-Boltzmann constant, W/m^2/K^4
  double k_s = 0.31;        // snow conductivity, W/m/degC
  double rho_s = 330.0;     // snow density, kg/m^3
  double c0 = 2110.0;       // pure-ice heat capacity, J/kg/degC
  double k0 = 2.034;        // pure-ice conductivity, W/m/degC
  double rho = 917.0;       // pure-ice density, kg/m^3
  double gamma1 = 18000.0;  // salinity weight on heat capacity, J*degC/kg
  double gamma2 = 0.117;    // salinity weight on conductivity, W/m
  double I0 = 1.59;         // penetrating shortwave radiation, W/m^2
  double kappa_i = 1.5;     // extinction coefficient, 1/m
  double Tm1 = -0.1;        // surface melting point, degC
  double Tm2 = -1.8;        // bottom melting point, degC
  double q_latent = 917.0 * 333400.0;  // volumetric latent heat, J/m^3
  double F_w = 2.0;         // ocean heat flux, W/m^2

  // Salinity-free ice diffusivity k0/(rho*c0), m^2/s.
  double D_i() const { return k0 / (rho * c0); }
  // Conductivity-to-latent-heat ratio k0/q_latent; scales gradients to m/s.
  double beta() const { return k0 / q_latent; }
  // Reduced interior source amplitude I0/(rho*c0), degC*m/s.
  double Ibar0() const { return I0 / (rho * c0); }

  // Throws ConfigError naming the violated invariant.
  void validate() const;
};

// One row of the monthly atmospheric forcing table.  alpha (albedo) may be
// absent only while F_r = 0.
struct MonthlyForcing {
  double F_r = 0.0;  // shortwave, W/m^2
  double F_L = 0.0;  // longwave, W/m^2
  double F_s = 0.0;  // sensible, W/m^2
  double F_l = 0.0;  // latent, W/m^2
  std::optional<double> alpha;  // albedo in [0,1]

  void validate() const;
};

enum class ForcingLookup {
  piecewise_constant,
  linear_midpoint,  // blend about month midpoints; exact at midpoints
};

// Twelve ordered monthly records plus the time-lookup rule; lookup is total
// on t >= 0 and 1-year periodic.
struct ForcingSchedule {
  std::array<MonthlyForcing, 12> months;
  ForcingLookup lookup_mode = ForcingLookup::piecewise_constant;

  void validate() const;
};

// Depth-dependent brine amplitude S(x) = A*(1 - cos(pi*(x/H)^(n/(m+x/H)))).
struct SalinityParams {
  double A = 1.6;   // amplitude, ppt
  double n = 0.407;
  double m = 0.573;

  void validate() const;
};

ThermalParams default_thermal();
ForcingSchedule default_forcing();
SalinityParams default_salinity();

// Total downward atmospheric heat flux (1-alpha)*F_r + F_L + F_s + F_l.
// Throws ConfigError when F_r > 0 with alpha absent.
double atmospheric_flux(const MonthlyForcing& f);

// Forcing record at clock time t (seconds from Jan 1), 1-year periodic.
MonthlyForcing forcing_at(const ForcingSchedule& s, double t);

// Salinity at depth x into ice of thickness H; domain error outside [0,H].
double salinity(double x, double H, const SalinityParams& p);

// Brine-adjusted heat capacity c0 + gamma1*S/T^2; requires T < 0.
double heat_capacity(double T, double S, const ThermalParams& p);

// Brine-adjusted conductivity k0 + gamma2*S/T; requires T < 0.
double thermal_conductivity(double T, double S, const ThermalParams& p);

}  // namespace icestate
