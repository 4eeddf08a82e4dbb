#pragma once

// Pulsed plane-wave background, classical phases and per-emission phase
// coefficients.
//
// The laser propagates along n0 = -z with k = omega0 (1, 0, 0, -1) and four-potential
//   A_B(phi) = cA(phi) eps + c.c.,   cA(phi) = A0 cos^2(pi phi / dphi) e^{-i phi}
// supported on |phi| <= dphi / 2. Every field-dependent quantity is a finite
// sum of complex exponentials, so cumulative integrals are evaluated in
// closed form.

#include "dcs/algebra.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace dcs {

inline constexpr double fine_structure = 1.0 / 137.035999;

/// Electron charge e = -|e|, |e| = sqrt(4 pi alpha) (Heaviside-Lorentz).
inline const double electron_charge = -std::sqrt(4.0 * std::numbers::pi * fine_structure);

inline constexpr double electron_mass_ev = 510998.95;

struct ExpTerm
{
  Complex coefficient;
  double frequency;
};

/// f(phi) = sum_k c_k exp(i w_k phi).
class ExponentialSum
{
 public:
  ExponentialSum() = default;
  explicit ExponentialSum(std::vector<ExpTerm> terms);

  Complex operator()(double phi) const;

  /// Integral of f over [lower, phi].
  Complex integral(double lower, double phi) const;

  ExponentialSum conjugate() const;
  ExponentialSum operator*(const ExponentialSum& other) const;
  ExponentialSum operator+(const ExponentialSum& other) const;
  ExponentialSum operator*(Complex scale) const;

  const std::vector<ExpTerm>& terms() const { return terms_; }
  double max_frequency() const;

 private:
  void merge();
  std::vector<ExpTerm> terms_;
};

/// Light-cone basis {k, k+, eps1, eps2} attached to the laser direction.
struct LightConeFrame
{
  FourVector k;
  FourVector k_plus;
  FourVector eps1;
  FourVector eps2;
};

class LaserPulse
{
 public:
  /// omega0 in units of m; polarization must satisfy eps.k = 0 and eps.eps* = -1.
  LaserPulse(double a0, double omega0, double delta_phi, ComplexFourVector polarization);

  static LaserPulse linear(double a0, double omega0, double delta_phi);
  /// Helicity +/-: eps = (0, 1, +/- i, 0) / sqrt2. The minus sign is the
  /// right-handed state |R> = (|H> - i|V>)/sqrt2 of the HV labelling.
  static LaserPulse circular(double a0, double omega0, double delta_phi, bool left_handed);

  double a0() const { return a0_; }
  double omega0() const { return omega0_; }
  double delta_phi() const { return delta_phi_; }
  /// A0 = m a0 / (sqrt2 |e|).
  double amplitude() const { return amplitude_; }
  /// e A0 (negative, since e < 0).
  double charge_amplitude() const { return electron_charge * amplitude_; }
  double phase_begin() const { return -0.5 * delta_phi_; }
  double phase_end() const { return 0.5 * delta_phi_; }

  const ComplexFourVector& polarization() const { return polarization_; }
  FourVector wave_vector() const { return omega0_ * FourVector(1.0, 0.0, 0.0, -1.0); }
  LightConeFrame frame() const;

  /// cA(phi); zero outside the pulse.
  Complex envelope_amplitude(double phi) const;
  /// Real four-potential A_B(phi).
  FourVector field_value(double phi) const;
  /// A_B(phi) . A_B(phi) (non-positive).
  double field_squared(double phi) const;

  /// Integral of cA over (-inf, phi].
  Complex cumulative_amplitude(double phi) const;
  /// Integral of A_B^2 over (-inf, phi].
  double cumulative_field_squared(double phi) const;

  /// f_p(phi) = int_{-inf}^{phi} (2e A_B.p - e^2 A_B^2) / (2 p.k).
  double classical_phase(const FourVector& p, double phi) const;

  /// cA / A0 and A_B^2 / A0^2 as exponential sums, valid inside the pulse.
  const ExponentialSum& normalized_amplitude() const { return normalized_amplitude_; }
  const ExponentialSum& normalized_field_squared() const { return normalized_field_squared_; }
  /// |cA| / A0 = cos^2(pi phi / dphi).
  const ExponentialSum& normalized_envelope() const { return normalized_envelope_; }

 private:
  double clamp_to_pulse(double phi) const;

  double a0_;
  double omega0_;
  double delta_phi_;
  double amplitude_;
  ComplexFourVector polarization_;
  ExponentialSum normalized_envelope_;
  ExponentialSum normalized_amplitude_;
  ExponentialSum normalized_field_squared_;
};

/// kappa, zeta, upsilon of one emission vertex: g(phi) = kappa phi +
/// int [2e Re{zeta cA} - e^2 upsilon A_B^2 / 2].
struct PhaseCoefficients
{
  double kappa = 0.0;
  Complex zeta{0.0, 0.0};
  double upsilon = 0.0;

  PhaseCoefficients operator+(const PhaseCoefficients& o) const
  {
    return {kappa + o.kappa, zeta + o.zeta, upsilon + o.upsilon};
  }
};

/// Coefficients of the vertex at which the cumulative emitted momentum steps
/// from `emitted_before` to `emitted_after` (sums of photon momenta).
/// Throws KinematicError on a vanishing lightfront denominator.
PhaseCoefficients phase_coefficients(const LaserPulse& pulse, const FourVector& p0,
                                     const FourVector& emitted_before,
                                     const FourVector& emitted_after);

/// g(phi) for the given coefficients.
double phase_function(const LaserPulse& pulse, const PhaseCoefficients& c, double phi);

/// dg/dphi.
double phase_derivative(const LaserPulse& pulse, const PhaseCoefficients& c, double phi);

}  // namespace dcs
