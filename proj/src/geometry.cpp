#include "dcs/geometry.hpp"

#include "dcs/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace dcs {

FourVector Photon::momentum() const
{
  return omega * FourVector(1.0, std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

FourVector Photon::polarization(int alpha) const
{
  if (alpha == 0) {
    return {0.0, std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
  }
  if (alpha == 1) return {0.0, -std::sin(phi), std::cos(phi), 0.0};
  throw std::invalid_argument("photon polarization index must be 0 or 1");
}

Photon make_photon(double omega, double theta, double phi)
{
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("photon energy must be positive");
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw ConfigError("photon angles must be finite");
  return Photon{omega, theta, phi};
}

FourVector electron_momentum(double gamma0)
{
  if (!(gamma0 > 1.0) || !std::isfinite(gamma0)) throw ConfigError("gamma0 must exceed 1");
  // gamma0 beta0 = sqrt(gamma0^2 - 1) without cancellation.
  const double gb = std::sqrt((gamma0 - 1.0) * (gamma0 + 1.0));
  return electron_mass * FourVector(gamma0, 0.0, 0.0, gb);
}

FourVector final_electron_momentum(const FourVector& p0, const FourVector& emitted, const FourVector& k)
{
  const FourVector rest = p0 - emitted;
  const double denom = minkowski_dot(k, rest);
  if (!(denom > 1e-12 * std::abs(minkowski_dot(k, p0)))) {
    throw KinematicError("collinear lightfront singularity");
  }
  const double kappa = (minkowski_dot(p0, emitted) - 0.5 * minkowski_square(emitted)) / denom;
  return rest + kappa * k;
}

FourVector effective_momentum(const LaserPulse& pulse, const FourVector& p0)
{
  const FourVector k = pulse.wave_vector();
  const double m2a2 = electron_mass * electron_mass * pulse.a0() * pulse.a0();
  return p0 + m2a2 / (2.0 * minkowski_dot(p0, k)) * k;
}

double resonance_frequency(int s, const LaserPulse& pulse, const FourVector& p0, const FourVector& q1,
                           double theta2, double phi2)
{
  if (s < 1) throw std::invalid_argument("harmonic order must be positive");
  const FourVector k = pulse.wave_vector();
  const FourVector dressed = effective_momentum(pulse, p0);
  const FourVector n2(1.0, std::sin(theta2) * std::cos(phi2), std::sin(theta2) * std::sin(phi2), std::cos(theta2));
  const FourVector sk = static_cast<double>(s) * k;
  const double numerator = minkowski_dot(sk, p0) - minkowski_dot(q1, FourVector(sk + dressed));
  const double denominator = minkowski_dot(n2, FourVector(sk + dressed - q1));
  if (std::abs(denominator) < 1e-300) throw KinematicError("resonance denominator vanishes");
  return numerator / denominator;
}

ScatteringGeometry::ScatteringGeometry(LaserPulse pulse, const FourVector& p0, std::vector<Photon> photons)
    : pulse_(std::move(pulse)), p0_(p0), photons_(std::move(photons))
{
  if (photons_.empty() || photons_.size() > 2) throw std::invalid_argument("geometry supports one or two photons");
  if (!is_on_shell(p0_) || p0_(0) <= 0.0) throw KinematicError("initial electron must be on-shell");
  const FourVector k = pulse_.wave_vector();

  FourVector emitted = FourVector::Zero();
  for (const auto& ph : photons_) emitted += ph.momentum();
  p_final_ = final_electron_momentum(p0_, emitted, k);

  if (photons_.size() == 2) {
    for (auto order : both_permutations) {
      const FourVector p1 = final_electron_momentum(p0_, photons_[emitted_at(order, 1)].momentum(), k);
      if (!(minkowski_dot(p1, k) > 0.0)) {
        throw KinematicError("intermediate electron on positron branch (P1.k <= 0)");
      }
      intermediate_[order == Permutation::pi1 ? 0 : 1] = p1;
    }
  }
}

int ScatteringGeometry::emitted_at(Permutation order, int n) const
{
  if (n != 1 && n != 2) throw std::invalid_argument("vertex index must be 1 or 2");
  if (photon_count() == 1) {
    if (n != 1) throw std::invalid_argument("single-photon geometry has one vertex");
    return 0;
  }
  const int first = order == Permutation::pi1 ? 0 : 1;
  return n == 1 ? first : 1 - first;
}

const FourVector& ScatteringGeometry::intermediate_momentum(Permutation order) const
{
  if (photon_count() != 2) throw std::logic_error("intermediate momentum requires two photons");
  return intermediate_[order == Permutation::pi1 ? 0 : 1];
}

PhaseCoefficients ScatteringGeometry::vertex_coefficients(Permutation order, int n) const
{
  const FourVector zero = FourVector::Zero();
  if (n == 1) return phase_coefficients(pulse_, p0_, zero, photons_[emitted_at(order, 1)].momentum());
  const FourVector first = photons_[emitted_at(order, 1)].momentum();
  const FourVector both = first + photons_[emitted_at(order, 2)].momentum();
  return phase_coefficients(pulse_, p0_, first, both);
}

double ScatteringGeometry::recoil() const
{
  return minkowski_dot(p0_, pulse_.wave_vector()) / (electron_mass * electron_mass);
}

}  // namespace dcs
