#include "icestate/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "icestate/errors.hpp"

namespace icestate {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invariant violated: ") + what);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double out = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(line, "cannot parse number '" + v + "' for key '" + key + "'");
  return out;
}

long parse_int(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const long out = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail(line, "cannot parse integer '" + v + "' for key '" + key + "'");
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(line, "cannot parse boolean '" + v + "' for key '" + key + "'");
}

std::vector<double> parse_list(const std::string& v, int line,
                               const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty list element for key '" + key + "'");
    out.push_back(parse_double(item, line, key));
  }
  if (out.empty()) fail(line, "empty list for key '" + key + "'");
  return out;
}

int month_index(const std::string& name) {
  static const char* names[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                                  "jul", "aug", "sep", "oct", "nov", "dec"};
  for (int i = 0; i < 12; ++i)
    if (name == names[i]) return i;
  return -1;
}

struct Parser {
  Config cfg;
  bool rho_set = false;
  bool q_set = false;

  void thermal_key(const std::string& k, const std::string& v, int line) {
    ThermalParams& t = cfg.thermal;
    const double x = parse_double(v, line, k);
    if (k == "sigma") t.sigma = x;
    else if (k == "k_s") t.k_s = x;
    else if (k == "rho_s") t.rho_s = x;
    else if (k == "c0") t.c0 = x;
    else if (k == "k0") t.k0 = x;
    else if (k == "rho") { t.rho = x; rho_set = true; }
    else if (k == "gamma1") t.gamma1 = x;
    else if (k == "gamma2") t.gamma2 = x;
    else if (k == "I0") t.I0 = x;
    else if (k == "kappa_i") t.kappa_i = x;
    else if (k == "Tm1") t.Tm1 = x;
    else if (k == "Tm2") t.Tm2 = x;
    else if (k == "q_latent") { t.q_latent = x; q_set = true; }
    else if (k == "F_w") t.F_w = x;
    else fail(line, "unknown key '" + k + "' in [thermal]");
  }

  void forcing_key(int month, const std::string& k, const std::string& v,
                   int line) {
    MonthlyForcing& f = cfg.forcing.months[static_cast<std::size_t>(month)];
    const double x = parse_double(v, line, k);
    if (k == "F_r") f.F_r = x;
    else if (k == "F_L") f.F_L = x;
    else if (k == "F_s") f.F_s = x;
    else if (k == "F_l") f.F_l = x;
    else if (k == "alpha") f.alpha = x;
    else fail(line, "unknown key '" + k + "' in a [forcing.*] section");
  }

  void salinity_key(const std::string& k, const std::string& v, int line) {
    SalinityParams& s = cfg.salinity;
    const double x = parse_double(v, line, k);
    if (k == "A") s.A = x;
    else if (k == "n") s.n = x;
    else if (k == "m") s.m = x;
    else fail(line, "unknown key '" + k + "' in [salinity]");
  }

  void run_key(const std::string& k, const std::string& v, int line) {
    RunSettings& r = cfg.run;
    if (k == "N_s") r.N_s = static_cast<int>(parse_int(v, line, k));
    else if (k == "N_i") r.N_i = static_cast<int>(parse_int(v, line, k));
    else if (k == "dt") r.dt = parse_double(v, line, k);
    else if (k == "theta") r.theta = parse_double(v, line, k);
    else if (k == "years") r.years = static_cast<int>(parse_int(v, line, k));
    else if (k == "days") r.days = parse_double(v, line, k);
    else if (k == "H0") r.H0 = parse_double(v, line, k);
    else if (k == "h0") r.h0 = parse_double(v, line, k);
    else if (k == "sine_amp") r.sine_amp = parse_double(v, line, k);
    else if (k == "d") r.d = parse_double(v, line, k);
    else if (k == "lambda") r.lambda = parse_double(v, line, k);
    else if (k == "c") r.c = parse_double(v, line, k);
    else if (k == "epsilon") r.epsilon = parse_double(v, line, k);
    else if (k == "open_loop") r.open_loop = parse_bool(v, line, k);
    else if (k == "matched_init") r.matched_init = parse_bool(v, line, k);
    else if (k == "salinity_on") r.salinity_on = parse_bool(v, line, k);
    else if (k == "interp_forcing") r.interp_forcing = parse_bool(v, line, k);
    else if (k == "snow_annual_m") r.snow_annual_m = parse_double(v, line, k);
    else if (k == "noise_y1") r.noise_y1 = parse_double(v, line, k);
    else if (k == "noise_y2") r.noise_y2 = parse_double(v, line, k);
    else if (k == "seed")
      r.seed = static_cast<unsigned long>(parse_int(v, line, k));
    else if (k == "Ibar0") r.Ibar0 = parse_double(v, line, k);
    else if (k == "H_bar") r.H_bar = parse_double(v, line, k);
    else if (k == "M_bound") r.M_bound = parse_double(v, line, k);
    else if (k == "snapshot_days") r.snapshot_days = parse_list(v, line, k);
    else if (k == "sample_stride")
      r.sample_stride = static_cast<int>(parse_int(v, line, k));
    else fail(line, "unknown key '" + k + "' in [run]");
  }
};

}  // namespace

void RunSettings::validate() const {
  require(N_s >= 16, "N_s >= 16");
  require(N_i >= 16, "N_i >= 16");
  require(dt > 0.0, "dt > 0");
  require(theta >= 0.5 && theta <= 1.0, "theta in [0.5, 1]");
  require(years >= 0, "years >= 0");
  require(days > 0.0, "days > 0");
  require(H0 > 0.0, "H0 > 0");
  require(h0 >= 0.0, "h0 >= 0");
  require(d >= 0.0 && d < 0.5, "d in [0, 1/2)");
  require(lambda > 0.0, "lambda > 0");
  require(c > 0.0, "c > 0");
  require(epsilon > 0.0, "epsilon > 0");
  require(snow_annual_m >= 0.0, "snow_annual_m >= 0");
  require(noise_y1 >= 0.0, "noise_y1 >= 0");
  require(noise_y2 >= 0.0, "noise_y2 >= 0");
  if (Ibar0) require(*Ibar0 >= 0.0, "Ibar0 >= 0");
  require(H_bar > 0.0, "H_bar > 0");
  require(M_bound > 0.0, "M_bound > 0");
  require(sample_stride >= 1, "sample_stride >= 1");
  for (double day : snapshot_days) require(day > 0.0, "snapshot_days > 0");
}

void Config::validate() const {
  thermal.validate();
  forcing.validate();
  salinity.validate();
  run.validate();
}

Config default_config() {
  Config cfg;
  cfg.thermal = default_thermal();
  cfg.forcing = default_forcing();
  cfg.salinity = default_salinity();
  cfg.run = RunSettings{};
  return cfg;
}

Config parse_config(const std::string& text) {
  Parser p;
  p.cfg = default_config();

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      const bool known =
          section == "thermal" || section == "salinity" || section == "run" ||
          (section.rfind("forcing.", 0) == 0 &&
           month_index(section.substr(8)) >= 0);
      if (!known) fail(line, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (val.empty()) fail(line, "empty value for key '" + key + "'");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "thermal") p.thermal_key(key, val, line);
    else if (section == "salinity") p.salinity_key(key, val, line);
    else if (section == "run") p.run_key(key, val, line);
    else p.forcing_key(month_index(section.substr(8)), key, val, line);
  }

  // q_latent tracks an overridden density unless explicitly pinned.
  if (p.rho_set && !p.q_set) p.cfg.thermal.q_latent = p.cfg.thermal.rho * 333400.0;

  if (p.cfg.run.interp_forcing)
    p.cfg.forcing.lookup_mode = ForcingLookup::linear_midpoint;
  p.cfg.validate();
  return p.cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace icestate
