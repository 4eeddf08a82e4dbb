#pragma once

// Emission kinematics for head-on electron-laser collisions: emitted photons
// with their linear polarization basis, lightfront momentum conservation and
// the intermediate/final electron momenta of one- and two-photon emission.

#include "dcs/pulse.hpp"

#include <array>
#include <vector>

namespace dcs {

/// Photon emitted with energy omega into (theta, phi); q = omega (1, n).
struct Photon
{
  double omega = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  FourVector momentum() const;
  /// Linear basis: alpha = 0 lies in the emission plane, alpha = 1 is
  /// azimuthal. Both satisfy q.eps = 0 and eps.eps = -1.
  FourVector polarization(int alpha) const;
};

Photon make_photon(double omega, double theta, double phi);

/// p0 = gamma0 (1, 0, 0, beta0): electron moving along +z, against the laser.
FourVector electron_momentum(double gamma0);

/// On-shell p_out = p0 - Q + kappa~ k, kappa~ = (p0.Q - Q^2/2) / k.(p0 - Q).
/// Throws KinematicError when k.(p0 - Q) is not positive.
FourVector final_electron_momentum(const FourVector& p0, const FourVector& emitted, const FourVector& k);

/// Intensity-dressed momentum p0 + m^2 a0^2 / (2 p0.k) k.
FourVector effective_momentum(const LaserPulse& pulse, const FourVector& p0);

/// Frequency of the second photon, emitted along unit direction (theta2, phi2),
/// on the s-th harmonic resonance line given the first photon q1.
/// Throws KinematicError when the resonance denominator vanishes.
double resonance_frequency(int s, const LaserPulse& pulse, const FourVector& p0, const FourVector& q1,
                           double theta2, double phi2);

/// Photon ordering of two-photon emission: photon 1 first, or photon 2 first.
enum class Permutation { pi1, pi2 };

inline constexpr std::array<Permutation, 2> both_permutations{Permutation::pi1, Permutation::pi2};

/// One electron crossing one pulse and emitting one or two photons.
class ScatteringGeometry
{
 public:
  ScatteringGeometry(LaserPulse pulse, const FourVector& p0, std::vector<Photon> photons);

  const LaserPulse& pulse() const { return pulse_; }
  const FourVector& initial_momentum() const { return p0_; }
  const std::vector<Photon>& photons() const { return photons_; }
  int photon_count() const { return static_cast<int>(photons_.size()); }

  /// Final electron momentum after all emissions.
  const FourVector& final_momentum() const { return p_final_; }

  /// Index (0-based) of the photon emitted at vertex n (1 or 2) under the ordering.
  int emitted_at(Permutation order, int n) const;

  /// On-shell intermediate momentum P1 between the two emissions.
  const FourVector& intermediate_momentum(Permutation order) const;

  /// Phase coefficients of vertex n (1 or 2) under the ordering; for a
  /// single photon only n = 1 exists.
  PhaseCoefficients vertex_coefficients(Permutation order, int n) const;

  /// Recoil parameter r = p0.k / m^2.
  double recoil() const;

 private:
  LaserPulse pulse_;
  FourVector p0_;
  std::vector<Photon> photons_;
  FourVector p_final_;
  std::array<FourVector, 2> intermediate_;
};

}  // namespace dcs
