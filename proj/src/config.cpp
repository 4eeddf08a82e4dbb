#include "dcs/config.hpp"

#include "dcs/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dcs {

namespace {

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_number(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text)
{
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

// Shortest representation that reads back to the same double.
std::string format_number(double v)
{
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

std::string join(const std::vector<std::string>& items)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

void require(bool ok, const std::string& message)
{
  if (!ok) throw ConfigError(message);
}

}  // namespace

double AngleSpec::radians(double gamma0, double a0) const
{
  switch (unit) {
    case AngleUnit::radian: return coefficient;
    case AngleUnit::pi: return coefficient * std::numbers::pi;
    case AngleUnit::inverse_gamma: return coefficient / gamma0;
    case AngleUnit::dressed: return coefficient * std::sqrt(1.0 + a0 * a0) / gamma0;
  }
  return coefficient;
}

std::string AngleSpec::to_string() const
{
  const std::string c = format_number(coefficient);
  switch (unit) {
    case AngleUnit::radian: return c;
    case AngleUnit::pi: return c + "pi";
    case AngleUnit::inverse_gamma: return c + "/gamma0";
    case AngleUnit::dressed: return c + "dressed";
  }
  return c;
}

AngleSpec parse_angle(const std::string& text)
{
  const std::string t = lower(trim(text));
  auto coefficient = [&](const std::string& head) {
    return head.empty() ? 1.0 : parse_number("angle", head);
  };
  try {
    if (auto pos = t.find("/gamma0"); pos != std::string::npos && pos + 7 == t.size()) {
      return {coefficient(t.substr(0, pos)), AngleUnit::inverse_gamma};
    }
    if (auto pos = t.find("dressed"); pos != std::string::npos && pos + 7 == t.size()) {
      return {coefficient(t.substr(0, pos)), AngleUnit::dressed};
    }
    if (auto pos = t.find("pi"); pos != std::string::npos) {
      double c = coefficient(t.substr(0, pos));
      const std::string tail = t.substr(pos + 2);
      if (!tail.empty()) {
        require(tail[0] == '/', "trailing characters");
        c /= parse_number("angle", tail.substr(1));
      }
      return {c, AngleUnit::pi};
    }
    return {parse_number("angle", t), AngleUnit::radian};
  } catch (const ConfigError&) {
    throw ConfigError("malformed angle '" + text + "' (use radians, Xpi, pi/N, X/gamma0 or Xdressed)");
  }
}

const char* laser_name(LaserPolarization p)
{
  switch (p) {
    case LaserPolarization::linear: return "linear";
    case LaserPolarization::left: return "L";
    case LaserPolarization::right: return "R";
  }
  return "?";
}

Channel parse_channel(const std::string& text)
{
  const std::string t = lower(trim(text));
  if (t == "off") return Channel::off;
  if (t == "on") return Channel::on;
  if (t == "total") return Channel::total;
  throw ConfigError("unknown channel '" + text + "' (off, on, total)");
}

LaserPulse ScanConfig::make_pulse() const
{
  switch (laser) {
    case LaserPolarization::linear: return LaserPulse::linear(a0, omega0, delta_phi);
    case LaserPolarization::left: return LaserPulse::circular(a0, omega0, delta_phi, true);
    case LaserPolarization::right: return LaserPulse::circular(a0, omega0, delta_phi, false);
  }
  throw ConfigError("unknown laser polarization");
}

const std::vector<std::pair<std::string, std::string>>& config_keys()
{
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"a0", "classical nonlinearity parameter"},
      {"omega0", "laser frequency in units of the electron mass"},
      {"omega0_ev", "laser frequency in eV (alternative to omega0)"},
      {"delta_phi", "pulse length in laser phase"},
      {"laser", "laser polarization: linear, L, R"},
      {"gamma0", "electron Lorentz factor"},
      {"beta0", "electron speed (alternative to gamma0)"},
      {"theta1", "polar angle of photon 1"},
      {"theta2", "polar angle of photon 2"},
      {"phi1", "azimuth of photon 1"},
      {"phi2", "azimuth of photon 2"},
      {"omega1_min", "photon 1 grid lower bound (excluded), scaled by 4 gamma0^2 omega0"},
      {"omega1_max", "photon 1 grid upper bound (included), scaled"},
      {"omega1_count", "photon 1 grid points"},
      {"omega2_min", "photon 2 grid lower bound (excluded), scaled"},
      {"omega2_max", "photon 2 grid upper bound (included), scaled"},
      {"omega2_count", "photon 2 grid points"},
      {"channels", "comma list of off, on, total"},
      {"stokes_basis", "HV or LR"},
      {"resonance_orders", "number of resonance lines written next to scan2 output (0 disables)"},
      {"omega1", "photon 1 energy for `point`, scaled"},
      {"omega2", "photon 2 energy for `point`, scaled"},
      {"omega_min", "single-photon grid lower bound (excluded), scaled"},
      {"omega_max", "single-photon grid upper bound (included), scaled"},
      {"omega_count", "single-photon grid points"},
      {"theta_min", "single-photon polar grid lower bound (excluded), units of 1/gamma0"},
      {"theta_max", "single-photon polar grid upper bound (included), units of 1/gamma0"},
      {"theta_count", "single-photon polar grid points"},
      {"phi", "single-photon azimuth"},
      {"gamma_list", "comma list of Lorentz factors for `ratio`"},
      {"phi1_list", "comma list of photon 1 azimuths for `ratio` (phi2 = phi1 + pi)"},
      {"samples", "random points for `selfcheck`"},
      {"seed", "random seed for `selfcheck`"},
      {"points_per_period", "quadrature nodes per fastest phase period"},
      {"min_points", "minimum quadrature nodes"},
      {"workers", "worker threads (overrides DCS_WORKERS)"},
      {"output", "output CSV path"},
  };
  return keys;
}

ConfigMap parse_config_text(std::istream& in)
{
  ConfigMap values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const auto& keys = config_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; })) {
      throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

ConfigMap read_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in);
}

ScanConfig resolve_config(const ConfigMap& values)
{
  ScanConfig c;
  for (const auto& [key, _] : values) {
    const auto& keys = config_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; })) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  auto has = [&](const char* key) { return values.count(key) > 0; };
  auto num = [&](const char* key, double& out) {
    if (has(key)) out = parse_number(key, values.at(key));
  };
  auto integer = [&](const char* key, int& out) {
    if (has(key)) out = parse_int(key, values.at(key));
  };
  auto angle = [&](const char* key, AngleSpec& out) {
    if (has(key)) out = parse_angle(values.at(key));
  };

  num("a0", c.a0);
  require(!(has("omega0") && has("omega0_ev")), "give either omega0 or omega0_ev, not both");
  num("omega0", c.omega0);
  if (has("omega0_ev")) c.omega0 = parse_number("omega0_ev", values.at("omega0_ev")) / electron_mass_ev;
  num("delta_phi", c.delta_phi);
  if (has("laser")) {
    const std::string l = lower(values.at("laser"));
    if (l == "linear" || l == "h") c.laser = LaserPolarization::linear;
    else if (l == "l" || l == "left") c.laser = LaserPolarization::left;
    else if (l == "r" || l == "right") c.laser = LaserPolarization::right;
    else throw ConfigError("laser must be linear, L or R");
  }
  require(!(has("gamma0") && has("beta0")), "give either gamma0 or beta0, not both");
  num("gamma0", c.gamma0);
  if (has("beta0")) {
    const double beta = parse_number("beta0", values.at("beta0"));
    require(beta > 0.0 && beta < 1.0, "beta0 must lie in (0, 1)");
    c.gamma0 = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  }
  angle("theta1", c.theta1);
  angle("theta2", c.theta2);
  angle("phi1", c.phi1);
  angle("phi2", c.phi2);
  num("omega1_min", c.omega1.min);
  num("omega1_max", c.omega1.max);
  integer("omega1_count", c.omega1.count);
  num("omega2_min", c.omega2.min);
  num("omega2_max", c.omega2.max);
  integer("omega2_count", c.omega2.count);
  if (has("channels")) {
    c.channels.clear();
    for (const auto& item : split_list(values.at("channels"))) c.channels.push_back(parse_channel(item));
  }
  if (has("stokes_basis")) c.stokes_basis = values.at("stokes_basis");
  integer("resonance_orders", c.resonance_orders);
  num("omega1", c.omega1_point);
  num("omega2", c.omega2_point);
  num("omega_min", c.omega.min);
  num("omega_max", c.omega.max);
  integer("omega_count", c.omega.count);
  num("theta_min", c.theta.min);
  num("theta_max", c.theta.max);
  integer("theta_count", c.theta.count);
  angle("phi", c.phi);
  if (has("gamma_list")) {
    c.gamma_list.clear();
    for (const auto& item : split_list(values.at("gamma_list"))) c.gamma_list.push_back(parse_number("gamma_list", item));
  }
  if (has("phi1_list")) {
    c.phi1_list.clear();
    for (const auto& item : split_list(values.at("phi1_list"))) c.phi1_list.push_back(parse_angle(item));
  }
  integer("samples", c.samples);
  if (has("seed")) c.seed = static_cast<unsigned>(parse_int("seed", values.at("seed")));
  integer("points_per_period", c.quadrature.points_per_period);
  integer("min_points", c.quadrature.min_points);
  if (has("workers")) c.workers = parse_int("workers", values.at("workers"));
  else c.workers = workers_from_environment();
  if (has("output")) c.output = values.at("output");

  require(c.a0 >= 0.0, "a0 must be non-negative");
  require(c.omega0 > 0.0, "laser frequency must be positive");
  require(c.delta_phi > 0.0, "delta_phi must be positive");
  require(c.gamma0 > 1.0, "gamma0 must exceed 1");
  for (const GridAxis* axis : {&c.omega1, &c.omega2, &c.omega, &c.theta}) {
    require(axis->count >= 1, "grid counts must be positive");
    require(axis->min >= 0.0 && axis->max > axis->min, "grid ranges must satisfy 0 <= min < max");
  }
  require(c.omega1_point > 0.0 && c.omega2_point > 0.0, "point energies must be positive");
  require(!c.channels.empty(), "at least one channel is required");
  c.stokes_basis = [&] {
    const std::string b = lower(c.stokes_basis);
    require(b == "hv" || b == "lr", "stokes_basis must be HV or LR");
    return b == "hv" ? std::string("HV") : std::string("LR");
  }();
  require(c.resonance_orders >= 0, "resonance_orders must be non-negative");
  require(!c.gamma_list.empty() && std::all_of(c.gamma_list.begin(), c.gamma_list.end(), [](double g) { return g > 1.0; }),
          "gamma_list entries must exceed 1");
  require(!c.phi1_list.empty(), "phi1_list must not be empty");
  require(c.samples >= 1, "samples must be positive");
  require(c.quadrature.points_per_period >= 4, "points_per_period must be at least 4");
  require(c.quadrature.min_points >= 16, "min_points must be at least 16");
  require(c.workers >= 1, "workers must be positive");
  for (const AngleSpec* t : {&c.theta1, &c.theta2}) {
    const double rad = t->radians(c.gamma0, c.a0);
    require(rad >= 0.0 && rad < 0.5 * std::numbers::pi, "photon polar angles must lie in [0, pi/2)");
  }
  return c;
}

int workers_from_environment()
{
  const char* env = std::getenv("DCS_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  const int n = parse_int("DCS_WORKERS", env);
  require(n >= 1, "DCS_WORKERS must be positive");
  return n;
}

ConfigMap describe(const ScanConfig& c)
{
  std::vector<std::string> channels;
  for (auto ch : c.channels) channels.emplace_back(channel_name(ch));
  std::vector<std::string> gammas;
  for (double g : c.gamma_list) gammas.push_back(format_number(g));
  std::vector<std::string> phis;
  for (const auto& p : c.phi1_list) phis.push_back(p.to_string());

  return {
      {"a0", format_number(c.a0)},
      {"omega0", format_number(c.omega0)},
      {"delta_phi", format_number(c.delta_phi)},
      {"laser", laser_name(c.laser)},
      {"gamma0", format_number(c.gamma0)},
      {"theta1", c.theta1.to_string()},
      {"theta2", c.theta2.to_string()},
      {"phi1", c.phi1.to_string()},
      {"phi2", c.phi2.to_string()},
      {"omega1_min", format_number(c.omega1.min)},
      {"omega1_max", format_number(c.omega1.max)},
      {"omega1_count", std::to_string(c.omega1.count)},
      {"omega2_min", format_number(c.omega2.min)},
      {"omega2_max", format_number(c.omega2.max)},
      {"omega2_count", std::to_string(c.omega2.count)},
      {"channels", join(channels)},
      {"stokes_basis", c.stokes_basis},
      {"resonance_orders", std::to_string(c.resonance_orders)},
      {"omega1", format_number(c.omega1_point)},
      {"omega2", format_number(c.omega2_point)},
      {"omega_min", format_number(c.omega.min)},
      {"omega_max", format_number(c.omega.max)},
      {"omega_count", std::to_string(c.omega.count)},
      {"theta_min", format_number(c.theta.min)},
      {"theta_max", format_number(c.theta.max)},
      {"theta_count", std::to_string(c.theta.count)},
      {"phi", c.phi.to_string()},
      {"gamma_list", join(gammas)},
      {"phi1_list", join(phis)},
      {"samples", std::to_string(c.samples)},
      {"seed", std::to_string(c.seed)},
      {"points_per_period", std::to_string(c.quadrature.points_per_period)},
      {"min_points", std::to_string(c.quadrature.min_points)},
      {"output", c.output},
  };
}

}  // namespace dcs
