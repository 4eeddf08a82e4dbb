#pragma once

// Spectral scans over photon energies: two-photon grids, single-photon
// angular-spectral maps, the off/on-shell ratio table and resonance lines.
// Points are independent; they run on a thread pool and are gathered in
// grid order, so output does not depend on the worker count.

#include "dcs/config.hpp"
#include "dcs/observables.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dcs {

/// Runs body(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any body is rethrown after all threads have joined.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

struct SpectralRow
{
  double omega1_scaled = 0.0;
  double omega2_scaled = 0.0;
  Channel channel = Channel::off;
  bool masked = false;
  std::string mask_reason;
  double d2w_normalized = 0.0;           // omega0^2 d^2W
  std::optional<double> concurrence;     // empty below the trace guard
  std::optional<StokesTensor> stokes;    // in the configured basis
};

/// Observables of one two-photon spectral point (energies in units of m).
/// Throws KinematicError for points the amplitudes cannot serve.
std::vector<SpectralRow> evaluate_point(const ScanConfig& config, const LaserPulse& pulse, double omega1,
                                        double omega2, PulseSampleCache* cache = nullptr);

/// Row order: omega1 outer, omega2 inner, channel innermost.
std::vector<SpectralRow> run_scan(const ScanConfig& config);

struct ResonanceRow
{
  double omega1_scaled = 0.0;
  int s = 1;
  std::optional<double> omega2_scaled;  // empty when the denominator vanishes
};

/// Resonance frequencies of photon 2 along the omega1 grid for s = 1..resonance_orders.
std::vector<ResonanceRow> resonance_lines(const ScanConfig& config);

struct SinglePhotonRow
{
  double omega_scaled = 0.0;
  double theta_gamma = 0.0;  // theta * gamma0
  bool masked = false;
  std::string mask_reason;
  double d1w_normalized = 0.0;  // omega0 d^1W
  std::optional<Eigen::Vector4d> stokes;
};

/// Row order: theta outer, omega inner.
std::vector<SinglePhotonRow> run_single_photon_scan(const ScanConfig& config);

struct SinglePhotonPoint
{
  double probability = 0.0;               // d^1W
  Eigen::Matrix2cd rho;                   // emission basis, unnormalized
  std::optional<Eigen::Vector4d> stokes;  // s_0..s_3 in the requested basis; empty below the trace guard
};

SinglePhotonPoint evaluate_single_photon(const LaserPulse& pulse, const FourVector& p0, const Photon& photon,
                                         PolarizationBasis basis, const QuadratureSettings& settings = {},
                                         PulseSampleCache* cache = nullptr);

struct RatioRow
{
  double gamma0 = 0.0;
  AngleSpec phi1;
  double max_off = 0.0;
  double max_on = 0.0;
  bool masked = false;
  double ratio = 0.0;
  double log10_ratio = 0.0;
  int order = 0;  // log10 rounded to the nearest integer
};

/// max_grid d^2W_Off / max_grid d^2W_On per (gamma0, phi1), with phi2 = phi1 + pi
/// and the configured theta expressions resolved per gamma0.
std::vector<RatioRow> run_ratio_table(const ScanConfig& config);

/// Fraction of masked rows.
double masked_fraction(const std::vector<SpectralRow>& rows);
double masked_fraction(const std::vector<SinglePhotonRow>& rows);

void write_csv(std::ostream& out, const std::vector<SpectralRow>& rows);
void write_csv(std::ostream& out, const std::vector<ResonanceRow>& rows);
void write_csv(std::ostream& out, const std::vector<SinglePhotonRow>& rows);
void write_csv(std::ostream& out, const std::vector<RatioRow>& rows);

PolarizationBasis stokes_basis(const ScanConfig& config);

}  // namespace dcs
