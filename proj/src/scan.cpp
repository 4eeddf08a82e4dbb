#include "dcs/scan.hpp"

#include "dcs/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace dcs {

namespace {

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& body)
{
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

PolarizationBasis stokes_basis(const ScanConfig& config)
{
  return config.stokes_basis == "LR" ? PolarizationBasis::lr : PolarizationBasis::hv;
}

std::vector<SpectralRow> evaluate_point(const ScanConfig& config, const LaserPulse& pulse, double omega1,
                                        double omega2, PulseSampleCache* cache)
{
  const double g = config.gamma0;
  const Photon photon1 = make_photon(omega1, config.theta1.radians(g, config.a0), config.phi1.radians(g, config.a0));
  const Photon photon2 = make_photon(omega2, config.theta2.radians(g, config.a0), config.phi2.radians(g, config.a0));
  const ScatteringGeometry geometry(pulse, electron_momentum(g), {photon1, photon2});
  const DoubleCompton compton(geometry, config.quadrature, cache);
  const PolarizationBasis basis = stokes_basis(config);
  const double scale = config.omega_scale();

  std::vector<SpectralRow> rows;
  for (Channel channel : config.channels) {
    SpectralRow row;
    row.omega1_scaled = omega1 / scale;
    row.omega2_scaled = omega2 / scale;
    row.channel = channel;
    const TwoPhotonDensityMatrix rho = density_matrix(geometry, compton.table(channel), channel);
    const double trace = rho.rho.trace().real();
    row.d2w_normalized = config.omega0 * config.omega0 * trace;
    if (trace >= trace_guard) {
      const Eigen::Matrix4cd rho_hat = normalized(basis_transform(rho, basis, photon1, photon2).rho);
      row.concurrence = concurrence(rho_hat);
      row.stokes = stokes_tensor(rho_hat, basis);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SpectralRow> run_scan(const ScanConfig& config)
{
  const LaserPulse pulse = config.make_pulse();
  PulseSampleCache cache(pulse);
  const int n1 = config.omega1.count;
  const int n2 = config.omega2.count;
  const double scale = config.omega_scale();
  std::vector<std::vector<SpectralRow>> points(static_cast<std::size_t>(n1) * n2);

  parallel_for(n1 * n2, config.workers, [&](int index) {
    const int i = index / n2;
    const int j = index % n2;
    const double x1 = config.omega1.at(i);
    const double x2 = config.omega2.at(j);
    try {
      points[index] = evaluate_point(config, pulse, x1 * scale, x2 * scale, &cache);
    } catch (const std::domain_error& e) {  // KinematicError and projection failures
      std::vector<SpectralRow> masked;
      for (Channel channel : config.channels) {
        SpectralRow row;
        row.omega1_scaled = x1;
        row.omega2_scaled = x2;
        row.channel = channel;
        row.masked = true;
        row.mask_reason = e.what();
        masked.push_back(std::move(row));
      }
      points[index] = std::move(masked);
    }
  });

  std::vector<SpectralRow> rows;
  rows.reserve(points.size() * config.channels.size());
  for (auto& p : points) std::move(p.begin(), p.end(), std::back_inserter(rows));
  return rows;
}

std::vector<ResonanceRow> resonance_lines(const ScanConfig& config)
{
  const LaserPulse pulse = config.make_pulse();
  const FourVector p0 = electron_momentum(config.gamma0);
  const double scale = config.omega_scale();
  const double g = config.gamma0;
  std::vector<ResonanceRow> rows;
  for (int i = 0; i < config.omega1.count; ++i) {
    const double x1 = config.omega1.at(i);
    const Photon photon1 = make_photon(x1 * scale, config.theta1.radians(g, config.a0), config.phi1.radians(g, config.a0));
    for (int s = 1; s <= config.resonance_orders; ++s) {
      ResonanceRow row{x1, s, std::nullopt};
      try {
        row.omega2_scaled = resonance_frequency(s, pulse, p0, photon1.momentum(), config.theta2.radians(g, config.a0),
                                                config.phi2.radians(g, config.a0)) /
                            scale;
      } catch (const KinematicError&) {
      }
      rows.push_back(row);
    }
  }
  return rows;
}

SinglePhotonPoint evaluate_single_photon(const LaserPulse& pulse, const FourVector& p0, const Photon& photon,
                                         PolarizationBasis basis, const QuadratureSettings& settings,
                                         PulseSampleCache* cache)
{
  const ScatteringGeometry geometry(pulse, p0, {photon});
  const SingleCompton compton(geometry, settings, cache);
  SinglePhotonPoint out;
  out.rho = single_photon_density_matrix(compton);
  out.probability = out.rho.trace().real();
  if (out.probability >= trace_guard) {
    const Eigen::Matrix2cd rho_hat = normalized(basis_transform(out.rho, PolarizationBasis::emission, basis, photon));
    Eigen::Vector4d s;
    for (int l = 0; l < 4; ++l) s(l) = single_photon_stokes(rho_hat, basis, l);
    out.stokes = s;
  }
  return out;
}

std::vector<SinglePhotonRow> run_single_photon_scan(const ScanConfig& config)
{
  const LaserPulse pulse = config.make_pulse();
  PulseSampleCache cache(pulse);
  const FourVector p0 = electron_momentum(config.gamma0);
  const PolarizationBasis basis = stokes_basis(config);
  const double scale = config.omega_scale();
  const double phi = config.phi.radians(config.gamma0, config.a0);
  const int nt = config.theta.count;
  const int nw = config.omega.count;
  std::vector<SinglePhotonRow> rows(static_cast<std::size_t>(nt) * nw);

  parallel_for(nt * nw, config.workers, [&](int index) {
    SinglePhotonRow& row = rows[index];
    row.theta_gamma = config.theta.at(index / nw);
    row.omega_scaled = config.omega.at(index % nw);
    try {
      const Photon photon = make_photon(row.omega_scaled * scale, row.theta_gamma / config.gamma0, phi);
      const SinglePhotonPoint point = evaluate_single_photon(pulse, p0, photon, basis, config.quadrature, &cache);
      row.d1w_normalized = config.omega0 * point.probability;
      row.stokes = point.stokes;
    } catch (const std::domain_error& e) {
      row.masked = true;
      row.mask_reason = e.what();
    }
  });
  return rows;
}

std::vector<RatioRow> run_ratio_table(const ScanConfig& config)
{
  std::vector<RatioRow> table;
  for (double gamma0 : config.gamma_list) {
    for (const AngleSpec& phi1 : config.phi1_list) {
      ScanConfig c = config;
      c.gamma0 = gamma0;
      c.phi1 = phi1;
      c.phi2 = AngleSpec{phi1.radians(gamma0, c.a0) + std::numbers::pi, AngleUnit::radian};
      c.channels = {Channel::off, Channel::on};

      RatioRow row;
      row.gamma0 = gamma0;
      row.phi1 = phi1;
      for (const SpectralRow& r : run_scan(c)) {
        if (r.masked) continue;
        double& target = r.channel == Channel::off ? row.max_off : row.max_on;
        target = std::max(target, r.d2w_normalized);
      }
      row.masked = !(row.max_on > 0.0);
      if (!row.masked) {
        row.ratio = row.max_off / row.max_on;
        row.log10_ratio = std::log10(row.ratio);
        row.order = static_cast<int>(std::lround(row.log10_ratio));
      }
      table.push_back(row);
    }
  }
  return table;
}

double masked_fraction(const std::vector<SpectralRow>& rows)
{
  if (rows.empty()) return 0.0;
  const auto n = std::count_if(rows.begin(), rows.end(), [](const SpectralRow& r) { return r.masked; });
  return static_cast<double>(n) / static_cast<double>(rows.size());
}

double masked_fraction(const std::vector<SinglePhotonRow>& rows)
{
  if (rows.empty()) return 0.0;
  const auto n = std::count_if(rows.begin(), rows.end(), [](const SinglePhotonRow& r) { return r.masked; });
  return static_cast<double>(n) / static_cast<double>(rows.size());
}

void write_csv(std::ostream& out, const std::vector<SpectralRow>& rows)
{
  out << "omega1_scaled,omega2_scaled,channel,d2W_normalized,concurrence,s11,s22,s33,masked\n";
  for (const auto& r : rows) {
    out << fmt(r.omega1_scaled) << ',' << fmt(r.omega2_scaled) << ',' << channel_name(r.channel) << ',';
    if (r.masked) {
      out << ",,,,,true\n";
      continue;
    }
    out << fmt(r.d2w_normalized) << ',' << fmt(r.concurrence) << ',';
    for (int l = 1; l <= 3; ++l) out << (r.stokes ? fmt((*r.stokes)(l, l)) : std::string()) << ',';
    out << "false\n";
  }
}

void write_csv(std::ostream& out, const std::vector<ResonanceRow>& rows)
{
  out << "omega1_scaled,s,omega2_scaled\n";
  for (const auto& r : rows) out << fmt(r.omega1_scaled) << ',' << r.s << ',' << fmt(r.omega2_scaled) << '\n';
}

void write_csv(std::ostream& out, const std::vector<SinglePhotonRow>& rows)
{
  out << "omega_scaled,theta_gamma,d1W_normalized,s1,s2,s3,p,masked\n";
  for (const auto& r : rows) {
    out << fmt(r.omega_scaled) << ',' << fmt(r.theta_gamma) << ',';
    if (r.masked) {
      out << ",,,,,true\n";
      continue;
    }
    out << fmt(r.d1w_normalized) << ',';
    if (r.stokes) {
      const Eigen::Vector4d& s = *r.stokes;
      out << fmt(s(1)) << ',' << fmt(s(2)) << ',' << fmt(s(3)) << ',' << fmt(s.tail<3>().norm()) << ',';
    } else {
      out << ",,,,";
    }
    out << "false\n";
  }
}

void write_csv(std::ostream& out, const std::vector<RatioRow>& rows)
{
  out << "gamma0,phi1,max_off_normalized,max_on_normalized,ratio,log10_ratio,order,masked\n";
  for (const auto& r : rows) {
    out << fmt(r.gamma0) << ',' << r.phi1.to_string() << ',' << fmt(r.max_off) << ',' << fmt(r.max_on) << ',';
    if (r.masked) {
      out << ",,,true\n";
      continue;
    }
    out << fmt(r.ratio) << ',' << fmt(r.log10_ratio) << ',' << r.order << ",false\n";
  }
}

}  // namespace dcs
