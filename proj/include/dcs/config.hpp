#pragma once

// Scan configuration: a flat key=value text format, angle expressions that
// refer to the electron energy, and validation into a ScanConfig.

#include "dcs/pulse.hpp"
#include "dcs/quadrature.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dcs {

/// Angles may be given in radians, multiples of pi, multiples of 1/gamma0,
/// or multiples of the dressed cone angle sqrt(1 + a0^2)/gamma0.
enum class AngleUnit { radian, pi, inverse_gamma, dressed };

struct AngleSpec
{
  double coefficient = 0.0;
  AngleUnit unit = AngleUnit::radian;

  double radians(double gamma0, double a0) const;
  std::string to_string() const;
};

/// Parses "0.3", "1.5pi", "pi/2", "1/gamma0", "2/gamma0", "dressed", "0.5dressed".
/// Throws ConfigError on malformed input.
AngleSpec parse_angle(const std::string& text);

enum class LaserPolarization { linear, left, right };

/// Uniform grid over (min, max]: count points x_i = min + (max - min) (i + 1) / count.
struct GridAxis
{
  double min = 0.0;
  double max = 1.1;
  int count = 96;

  double at(int i) const { return min + (max - min) * (i + 1) / count; }
};

struct ScanConfig
{
  // Laser.
  double a0 = 0.1;
  double omega0 = 1e-5;  // units of m
  double delta_phi = 40.0;
  LaserPolarization laser = LaserPolarization::linear;

  // Electron.
  double gamma0 = 70.71244595191452;  // beta0 = 0.9999

  // Photon directions.
  AngleSpec theta1{1.0, AngleUnit::inverse_gamma};
  AngleSpec theta2{1.0, AngleUnit::inverse_gamma};
  AngleSpec phi1{0.5, AngleUnit::pi};
  AngleSpec phi2{1.5, AngleUnit::pi};

  // Two-photon spectral grid, in units of 4 gamma0^2 omega0.
  GridAxis omega1;
  GridAxis omega2;
  std::vector<Channel> channels{Channel::off};
  std::string stokes_basis = "HV";
  int resonance_orders = 4;

  // Single spectral point (verb `point`), scaled like the grid.
  double omega1_point = 0.5;
  double omega2_point = 0.5;

  // Single-photon map (verb `scan1`): omega scaled, theta in units of 1/gamma0.
  GridAxis omega{0.0, 1.5, 96};
  GridAxis theta{0.0, 3.0, 64};
  AngleSpec phi{0.0, AngleUnit::radian};

  // Ratio table (verb `ratio`).
  std::vector<double> gamma_list{10.0, 100.0};
  std::vector<AngleSpec> phi1_list{{0.5, AngleUnit::pi}, {0.0, AngleUnit::pi}};

  // Self-check (verb `selfcheck`).
  int samples = 20;
  unsigned seed = 12345;

  QuadratureSettings quadrature;
  int workers = 1;
  std::string output = "scan.csv";

  LaserPulse make_pulse() const;
  double omega_scale() const { return 4.0 * gamma0 * gamma0 * omega0; }
};

using ConfigMap = std::map<std::string, std::string>;

/// Every key accepted by resolve_config, with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Reads "key = value" lines; '#' starts a comment. Throws ConfigError on
/// lines without '=' and on unknown keys.
ConfigMap parse_config_text(std::istream& in);
ConfigMap read_config_file(const std::string& path);

/// Applies `values` on top of the defaults and validates. Mutually
/// exclusive pairs: omega0 / omega0_ev and gamma0 / beta0.
ScanConfig resolve_config(const ConfigMap& values);

/// Worker count from DCS_WORKERS, or 1 when unset. Throws ConfigError on garbage.
int workers_from_environment();

/// Canonical key=value form of the resolved configuration (sorted keys).
ConfigMap describe(const ScanConfig& config);

Channel parse_channel(const std::string& text);
const char* laser_name(LaserPolarization p);

}  // namespace dcs
