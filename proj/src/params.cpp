#include "icestate/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "icestate/errors.hpp"

namespace icestate {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invariant violated: ") + what);
}

}  // namespace

void ThermalParams::validate() const {
  require(sigma > 0.0, "sigma > 0");
  require(k_s > 0.0, "k_s > 0");
  require(rho_s > 0.0, "rho_s > 0");
  require(c0 > 0.0, "c0 > 0");
  require(k0 > 0.0, "k0 > 0");
  require(rho > 0.0, "rho > 0");
  require(gamma1 >= 0.0, "gamma1 >= 0");
  require(gamma2 >= 0.0, "gamma2 >= 0");
  require(I0 >= 0.0, "I0 >= 0");
  require(kappa_i > 0.0, "kappa_i > 0");
  require(Tm2 < Tm1 && Tm1 <= 0.0, "Tm2 < Tm1 <= 0");
  require(q_latent > 0.0, "q_latent > 0");
  require(D_i() > 0.0, "D_i > 0");
  require(beta() > 0.0, "beta > 0");
}

void MonthlyForcing::validate() const {
  if (alpha) require(*alpha >= 0.0 && *alpha <= 1.0, "alpha in [0,1]");
  require(F_r >= 0.0, "F_r >= 0");
  if (F_r > 0.0) require(alpha.has_value(), "alpha present whenever F_r > 0");
}

void ForcingSchedule::validate() const {
  for (const auto& m : months) m.validate();
}

void SalinityParams::validate() const {
  require(A >= 0.0, "A >= 0");
  require(n > 0.0, "n > 0");
  require(m > 0.0, "m > 0");
}

ThermalParams default_thermal() { return ThermalParams{}; }

ForcingSchedule default_forcing() {
  ForcingSchedule s;
  auto row = [](double F_r, double F_L, double F_s, double F_l,
                std::optional<double> alpha) {
    MonthlyForcing f;
    f.F_r = F_r;
    f.F_L = F_L;
    f.F_s = F_s;
    f.F_l = F_l;
    f.alpha = alpha;
    return f;
  };
  s.months = {
      row(0.0, 168.0, 19.0, 0.0, std::nullopt),       // Jan
      row(0.0, 166.0, 12.3, -0.323, std::nullopt),    // Feb
      row(30.7, 166.0, 11.6, -0.484, 0.83),           // Mar
      row(160.0, 187.0, 4.68, -1.45, 0.81),           // Apr
      row(286.0, 244.0, -7.26, -7.43, 0.82),          // May
      row(310.0, 291.0, -6.30, -11.3, 0.78),          // Jun
      row(220.0, 308.0, -4.84, -10.3, 0.64),          // Jul
      row(145.0, 302.0, -6.46, -10.7, 0.69),          // Aug
      row(59.7, 266.0, -2.74, -6.30, 0.84),           // Sep
      row(6.46, 224.0, 1.61, -3.07, 0.85),            // Oct
      row(0.0, 181.0, 9.04, -0.161, std::nullopt),    // Nov
      row(0.0, 176.0, 12.8, -0.161, std::nullopt),    // Dec
  };
  return s;
}

SalinityParams default_salinity() { return SalinityParams{}; }

double atmospheric_flux(const MonthlyForcing& f) {
  double shortwave = 0.0;
  if (f.F_r != 0.0) {
    if (!f.alpha)
      throw ConfigError("atmospheric_flux: alpha required when F_r > 0");
    shortwave = (1.0 - *f.alpha) * f.F_r;
  }
  return shortwave + f.F_L + f.F_s + f.F_l;
}

MonthlyForcing forcing_at(const ForcingSchedule& s, double t) {
  double tau = std::fmod(t, seconds_per_year);
  if (tau < 0.0) tau += seconds_per_year;

  if (s.lookup_mode == ForcingLookup::piecewise_constant) {
    int idx = static_cast<int>(tau / seconds_per_month);
    if (idx > 11) idx = 11;  // tau == year wraps to 0, so only a guard
    return s.months[static_cast<std::size_t>(idx)];
  }

  // Linear interpolation anchored at month midpoints.  Shortwave is blended
  // through the absorbed product alpha*F_r so that the total atmospheric
  // flux stays continuous; months with F_r = 0 contribute zero regardless
  // of their (absent) albedo.
  const double mid_offset = 0.5 * seconds_per_month;
  double u = (tau - mid_offset) / seconds_per_month;
  const double fl = std::floor(u);
  const double w = u - fl;  // weight of the later month
  int a = static_cast<int>(fl);
  a = ((a % 12) + 12) % 12;
  const int b = (a + 1) % 12;
  const MonthlyForcing& fa = s.months[static_cast<std::size_t>(a)];
  const MonthlyForcing& fb = s.months[static_cast<std::size_t>(b)];

  auto lerp = [w](double x, double y) { return (1.0 - w) * x + w * y; };
  MonthlyForcing out;
  out.F_r = lerp(fa.F_r, fb.F_r);
  out.F_L = lerp(fa.F_L, fb.F_L);
  out.F_s = lerp(fa.F_s, fb.F_s);
  out.F_l = lerp(fa.F_l, fb.F_l);
  const double absorbed =
      lerp(fa.alpha ? *fa.alpha * fa.F_r : 0.0, fb.alpha ? *fb.alpha * fb.F_r : 0.0);
  if (out.F_r > 0.0) out.alpha = absorbed / out.F_r;
  return out;
}

double salinity(double x, double H, const SalinityParams& p) {
  if (!(H > 0.0)) throw std::domain_error("salinity: H must be > 0");
  if (!(x >= 0.0 && x <= H))
    throw std::domain_error("salinity: depth outside [0, H]");
  const double r = x / H;
  const double expo = p.n / (p.m + r);
  return p.A * (1.0 - std::cos(M_PI * std::pow(r, expo)));
}

double heat_capacity(double T, double S, const ThermalParams& p) {
  if (!(T < 0.0))
    throw std::domain_error("heat_capacity: T must be < 0 (brine singularity)");
  return p.c0 + p.gamma1 * S / (T * T);
}

double thermal_conductivity(double T, double S, const ThermalParams& p) {
  if (!(T < 0.0))
    throw std::domain_error(
        "thermal_conductivity: T must be < 0 (brine singularity)");
  return p.k0 + p.gamma2 * S / T;
}

}  // namespace icestate
