// Command-line front end: spectral scans, the off/on-shell ratio table,
// single-point inspection and a quick invariant self-check.
//
// Every configuration key can come from a key=value file (--config) and be
// overridden by a flag of the same name, e.g. --gamma0 100 --phi1 0.5pi.

#include "dcs/config.hpp"
#include "dcs/errors.hpp"
#include "dcs/scan.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#ifndef DCS_VERSION
#define DCS_VERSION "unknown"
#endif

namespace {

using namespace dcs;

constexpr int exit_config_error = 2;
constexpr int exit_mostly_masked = 3;

struct Options
{
  std::string config_path;
  ConfigMap flags;
};

void add_config_options(CLI::App& cmd, Options& options)
{
  cmd.add_option("--config", options.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  for (const auto& [key, help] : config_keys()) {
    cmd.add_option_function<std::string>("--" + key, [&options, key = key](const std::string& v) { options.flags[key] = v; },
                                         help);
  }
}

ScanConfig load(const Options& options)
{
  ConfigMap values;
  if (!options.config_path.empty()) values = read_config_file(options.config_path);
  for (const auto& [k, v] : options.flags) values[k] = v;
  return resolve_config(values);
}

void write_sidecar(const std::string& verb, const ScanConfig& config, std::size_t rows, double masked)
{
  nlohmann::ordered_json meta;
  meta["code_version"] = DCS_VERSION;
  meta["verb"] = verb;
  nlohmann::ordered_json resolved;
  for (const auto& [k, v] : describe(config)) resolved[k] = v;
  meta["config"] = resolved;
  meta["quadrature"] = {{"rule", "composite Chebyshev-Lobatto panels"},
                        {"panel_degree", PhaseGrid::panel_degree},
                        {"points_per_period", config.quadrature.points_per_period},
                        {"min_points", config.quadrature.min_points},
                        {"kappa_min", kappa_min}};
  meta["omega_scale"] = config.omega_scale();
  meta["rows"] = rows;
  meta["masked_fraction"] = masked;
  std::ofstream out(config.output + ".json");
  out << meta.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  return out;
}

int finish(double masked)
{
  if (masked > 0.5) {
    std::fprintf(stderr, "more than half of the points are masked (%.1f%%)\n", 100.0 * masked);
    return exit_mostly_masked;
  }
  return 0;
}

int run_scan2(const ScanConfig& config)
{
  const auto rows = run_scan(config);
  {
    auto out = open_output(config.output);
    write_csv(out, rows);
  }
  if (config.resonance_orders > 0) {
    const std::filesystem::path path(config.output);
    auto out = open_output((path.parent_path() / (path.stem().string() + "_resonance.csv")).string());
    write_csv(out, resonance_lines(config));
  }
  const double masked = masked_fraction(rows);
  write_sidecar("scan2", config, rows.size(), masked);
  return finish(masked);
}

int run_scan1(const ScanConfig& config)
{
  const auto rows = run_single_photon_scan(config);
  {
    auto out = open_output(config.output);
    write_csv(out, rows);
  }
  const double masked = masked_fraction(rows);
  write_sidecar("scan1", config, rows.size(), masked);
  return finish(masked);
}

int run_ratio(const ScanConfig& config)
{
  const auto rows = run_ratio_table(config);
  {
    auto out = open_output(config.output);
    write_csv(out, rows);
  }
  write_csv(std::cout, rows);
  write_sidecar("ratio", config, rows.size(), 0.0);
  return 0;
}

void print_matrix(const Eigen::Matrix4cd& m)
{
  for (int r = 0; r < 4; ++r) {
    std::printf("   ");
    for (int c = 0; c < 4; ++c) std::printf(" (%+.6e %+.6ei)", m(r, c).real(), m(r, c).imag());
    std::printf("\n");
  }
}

int run_point(const ScanConfig& config)
{
  const LaserPulse pulse = config.make_pulse();
  const double scale = config.omega_scale();
  const double g = config.gamma0;
  const Photon photon1 =
      make_photon(config.omega1_point * scale, config.theta1.radians(g, config.a0), config.phi1.radians(g, config.a0));
  const Photon photon2 =
      make_photon(config.omega2_point * scale, config.theta2.radians(g, config.a0), config.phi2.radians(g, config.a0));
  const ScatteringGeometry geometry(pulse, electron_momentum(g), {photon1, photon2});
  const DoubleCompton compton(geometry, config.quadrature);
  const PolarizationBasis basis = stokes_basis(config);

  std::printf("omega1 = %.12g, omega2 = %.12g (units of 4 gamma0^2 omega0 = %.12g m)\n", config.omega1_point,
              config.omega2_point, scale);
  std::printf("on-shell pure-state concurrence estimate: %.6e\n", compton.on_shell_concurrence_estimate());
  for (Channel channel : config.channels) {
    const TwoPhotonDensityMatrix rho = density_matrix(geometry, compton.table(channel), channel);
    const double trace = rho.rho.trace().real();
    std::printf("\n[%s] normalized d2W = %.12g\n", channel_name(channel), config.omega0 * config.omega0 * trace);
    if (trace < trace_guard) {
      std::printf("  trace below guard; normalized observables undefined\n");
      continue;
    }
    const Eigen::Matrix4cd rho_hat = normalized(basis_transform(rho, basis, photon1, photon2).rho);
    std::printf("  normalized density matrix (%s basis):\n", basis_name(basis));
    print_matrix(rho_hat);
    const StokesTensor s = stokes_tensor(rho_hat, basis);
    std::printf("  concurrence = %.9f  fidelity = %.9f  P = %.9f\n", concurrence(rho_hat), fidelity(rho_hat),
                two_entangled_degree(s));
    std::printf("  Stokes tensor s_{l1 l2}:\n");
    for (int l1 = 0; l1 < 4; ++l1) {
      std::printf("   ");
      for (int l2 = 0; l2 < 4; ++l2) std::printf(" %+.9f", s(l1, l2));
      std::printf("\n");
    }
  }
  return 0;
}

int run_selfcheck(const ScanConfig& config)
{
  const LaserPulse pulse = config.make_pulse();
  PulseSampleCache cache(pulse);
  const double scale = config.omega_scale();
  const double g = config.gamma0;
  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> energy(0.05, 1.1);

  struct Check
  {
    const char* name;
    double tolerance;
    double worst = 0.0;
  };
  std::vector<Check> checks{{"final electron on shell |p2^2 - 1|", 1e-9},
                            {"density matrix Hermitian (relative)", 1e-12},
                            {"density matrix PSD (-min eigenvalue / norm)", 1e-10},
                            {"trace vs sum |M|^2 (relative)", 1e-8},
                            {"concurrence outside [0, 1]", 0.0},
                            {"|Stokes| - 1 excess", 1e-10},
                            {"Ward identity, total channel (relative)", 1e-6},
                            {"on-shell factorization vs U table (relative)", 1e-6}};
  int masked = 0;
  for (int n = 0; n < config.samples; ++n) {
    const Photon photon1 =
        make_photon(energy(rng) * scale, config.theta1.radians(g, config.a0), config.phi1.radians(g, config.a0));
    const Photon photon2 =
        make_photon(energy(rng) * scale, config.theta2.radians(g, config.a0), config.phi2.radians(g, config.a0));
    try {
      const ScatteringGeometry geometry(pulse, electron_momentum(g), {photon1, photon2});
      const DoubleCompton compton(geometry, config.quadrature, &cache);
      checks[0].worst = std::max(checks[0].worst, std::abs(minkowski_square(geometry.final_momentum()) - 1.0));
      for (Channel channel : {Channel::off, Channel::on, Channel::total}) {
        const AmplitudeTable table = compton.table(channel);
        const TwoPhotonDensityMatrix rho = density_matrix(geometry, table, channel);
        const double norm = rho.rho.norm();
        checks[1].worst = std::max(checks[1].worst, (rho.rho - rho.rho.adjoint()).norm() / norm);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho.rho, Eigen::EigenvaluesOnly);
        checks[2].worst = std::max(checks[2].worst, -eig.eigenvalues().minCoeff() / norm);
        const double dual = emission_probability(geometry, table);
        checks[3].worst = std::max(checks[3].worst, std::abs(rho.rho.trace().real() - dual) / dual);
        if (rho.rho.trace().real() < trace_guard) continue;
        const TwoPhotonDensityMatrix hv = basis_transform(rho, stokes_basis(config), photon1, photon2);
        const Eigen::Matrix4cd rho_hat = normalized(hv.rho);
        const double c = concurrence(rho_hat);
        checks[4].worst = std::max(checks[4].worst, std::max(-c, c - 1.0));
        checks[5].worst = std::max(checks[5].worst, stokes_tensor(rho_hat, hv.basis).cwiseAbs().maxCoeff() - 1.0);
      }
      const AmplitudeTable total = compton.table(Channel::total);
      double reference = 0.0;
      for (const auto& v : total.values) reference = std::max(reference, std::abs(v));
      const ComplexFourVector q1 = photon1.momentum().cast<Complex>() / photon1.omega;
      const ComplexFourVector e2 = photon2.polarization(0).cast<Complex>();
      const ComplexFourVector e1 = photon1.polarization(0).cast<Complex>();
      for (auto s0 : both_spins) {
        for (auto s2 : both_spins) {
          const Complex ward = compton.amplitude(Channel::total, q1, e2, s0, s2);
          checks[6].worst = std::max(checks[6].worst, std::abs(ward) / reference);
          const Complex fact = compton.on_shell_factorized(e1, e2, s0, s2);
          const Complex table_on = compton.amplitude(Channel::on, e1, e2, s0, s2);
          checks[7].worst = std::max(checks[7].worst, std::abs(fact - table_on) / reference);
        }
      }
    } catch (const KinematicError&) {
      ++masked;
    }
  }
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.worst <= c.tolerance;
    ok = ok && pass;
    std::printf("%s  %-48s worst %.3e (tolerance %.1e)\n", pass ? "PASS" : "FAIL", c.name, c.worst, c.tolerance);
  }
  std::printf("%d of %d sampled points masked\n", masked, config.samples);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Double-Compton photon emission, entanglement and polarization scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DCS_VERSION);

  struct Verb
  {
    const char* name;
    const char* help;
    int (*run)(const ScanConfig&);
  };
  const Verb verbs[] = {
      {"scan2", "two-photon spectral grid -> CSV (+ resonance lines, JSON metadata)", run_scan2},
      {"scan1", "single-photon angular-spectral map -> CSV", run_scan1},
      {"ratio", "off/on-shell maximum ratio table -> CSV", run_ratio},
      {"point", "one spectral point: density matrix, concurrence, Stokes tensor", run_point},
      {"selfcheck", "invariant checks at random spectral points", run_selfcheck},
  };
  std::vector<Options> options(std::size(verbs));
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < std::size(verbs); ++i) {
    commands.push_back(app.add_subcommand(verbs[i].name, verbs[i].help));
    add_config_options(*commands.back(), options[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  for (std::size_t i = 0; i < std::size(verbs); ++i) {
    if (!commands[i]->parsed()) continue;
    try {
      return verbs[i].run(load(options[i]));
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "configuration error: %s\n", e.what());
      return exit_config_error;
    } catch (const KinematicError& e) {
      std::fprintf(stderr, "masked point: %s\n", e.what());
      return exit_mostly_masked;
    }
  }
  return exit_config_error;
}
