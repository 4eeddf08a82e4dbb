#include "dcs/pulse.hpp"

#include "dcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcs {

namespace {

// (exp(i theta) - 1) / (i theta)
Complex exprel_imag(double theta)
{
  if (std::abs(theta) < 1e-3) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0, theta / 2.0 - theta * t2 / 24.0 + theta * t2 * t2 / 720.0};
  }
  return {std::sin(theta) / theta, (1.0 - std::cos(theta)) / theta};
}

}  // namespace

ExponentialSum::ExponentialSum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) { merge(); }

void ExponentialSum::merge()
{
  std::sort(terms_.begin(), terms_.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return a.frequency < b.frequency; });
  std::vector<ExpTerm> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && std::abs(merged.back().frequency - t.frequency) <= 1e-13 * (1.0 + std::abs(t.frequency))) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const ExpTerm& t) { return std::abs(t.coefficient) == 0.0; });
  terms_ = std::move(merged);
}

Complex ExponentialSum::operator()(double phi) const
{
  Complex sum{0.0, 0.0};
  for (const auto& t : terms_) sum += t.coefficient * std::polar(1.0, t.frequency * phi);
  return sum;
}

Complex ExponentialSum::integral(double lower, double phi) const
{
  const double length = phi - lower;
  Complex sum{0.0, 0.0};
  for (const auto& t : terms_) {
    sum += t.coefficient * std::polar(1.0, t.frequency * lower) * exprel_imag(t.frequency * length);
  }
  return sum * length;
}

ExponentialSum ExponentialSum::conjugate() const
{
  std::vector<ExpTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({std::conj(t.coefficient), -t.frequency});
  return ExponentialSum(std::move(out));
}

ExponentialSum ExponentialSum::operator*(const ExponentialSum& other) const
{
  std::vector<ExpTerm> out;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) out.push_back({a.coefficient * b.coefficient, a.frequency + b.frequency});
  }
  return ExponentialSum(std::move(out));
}

ExponentialSum ExponentialSum::operator+(const ExponentialSum& other) const
{
  std::vector<ExpTerm> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ExponentialSum(std::move(out));
}

ExponentialSum ExponentialSum::operator*(Complex scale) const
{
  std::vector<ExpTerm> out = terms_;
  for (auto& t : out) t.coefficient *= scale;
  return ExponentialSum(std::move(out));
}

double ExponentialSum::max_frequency() const
{
  double w = 0.0;
  for (const auto& t : terms_) w = std::max(w, std::abs(t.frequency));
  return w;
}

LaserPulse::LaserPulse(double a0, double omega0, double delta_phi, ComplexFourVector polarization)
    : a0_(a0),
      omega0_(omega0),
      delta_phi_(delta_phi),
      amplitude_(electron_mass * a0 / (std::sqrt(2.0) * std::abs(electron_charge))),
      polarization_(std::move(polarization))
{
  if (!(a0 >= 0.0) || !(omega0 > 0.0) || !(delta_phi > 0.0)) {
    throw ConfigError("laser pulse requires a0 >= 0, omega0 > 0, delta_phi > 0");
  }
  const Complex eps_k = minkowski_dot(polarization_, wave_vector());
  const Complex eps_eps_conj = minkowski_dot(polarization_, ComplexFourVector(polarization_.conjugate()));
  if (std::abs(eps_k) > 1e-12 * omega0 || std::abs(eps_eps_conj + 1.0) > 1e-12) {
    throw ConfigError("laser polarization must satisfy eps.k = 0 and eps.eps* = -1");
  }

  const double nu = 2.0 * std::numbers::pi / delta_phi;
  normalized_envelope_ = ExponentialSum({{0.5, 0.0}, {0.25, nu}, {0.25, -nu}});
  normalized_amplitude_ = normalized_envelope_ * ExponentialSum({{1.0, -1.0}});

  const Complex eps_eps = minkowski_dot(polarization_, polarization_);
  const ExponentialSum amp_sq = normalized_amplitude_ * normalized_amplitude_;
  const ExponentialSum env_sq = normalized_envelope_ * normalized_envelope_;
  normalized_field_squared_ = amp_sq * eps_eps + amp_sq.conjugate() * std::conj(eps_eps) + env_sq * (2.0 * eps_eps_conj);
}

LaserPulse LaserPulse::linear(double a0, double omega0, double delta_phi)
{
  return LaserPulse(a0, omega0, delta_phi, ComplexFourVector(0.0, 1.0, 0.0, 0.0));
}

LaserPulse LaserPulse::circular(double a0, double omega0, double delta_phi, bool left_handed)
{
  const double s = 1.0 / std::sqrt(2.0);
  const Complex y = left_handed ? Complex(0.0, s) : Complex(0.0, -s);
  return LaserPulse(a0, omega0, delta_phi, ComplexFourVector(0.0, s, y, 0.0));
}

LightConeFrame LaserPulse::frame() const
{
  return {wave_vector(), omega0_ * FourVector(1.0, 0.0, 0.0, 1.0), FourVector(0.0, 1.0, 0.0, 0.0),
          FourVector(0.0, 0.0, 1.0, 0.0)};
}

double LaserPulse::clamp_to_pulse(double phi) const
{
  return std::clamp(phi, phase_begin(), phase_end());
}

Complex LaserPulse::envelope_amplitude(double phi) const
{
  if (phi <= phase_begin() || phi >= phase_end()) return {0.0, 0.0};
  const double c = std::cos(std::numbers::pi * phi / delta_phi_);
  return amplitude_ * c * c * std::polar(1.0, -phi);
}

FourVector LaserPulse::field_value(double phi) const
{
  const Complex a = envelope_amplitude(phi);
  return 2.0 * (a * polarization_).real();
}

double LaserPulse::field_squared(double phi) const
{
  const FourVector a = field_value(phi);
  return minkowski_square(a);
}

Complex LaserPulse::cumulative_amplitude(double phi) const
{
  if (phi <= phase_begin()) return {0.0, 0.0};
  return amplitude_ * normalized_amplitude_.integral(phase_begin(), clamp_to_pulse(phi));
}

double LaserPulse::cumulative_field_squared(double phi) const
{
  if (phi <= phase_begin()) return 0.0;
  return amplitude_ * amplitude_ * normalized_field_squared_.integral(phase_begin(), clamp_to_pulse(phi)).real();
}

double LaserPulse::classical_phase(const FourVector& p, double phi) const
{
  const double pk = minkowski_dot(p, wave_vector());
  if (std::abs(pk) <= 1e-300 || std::abs(pk) < 1e-14 * omega0_ * std::abs(p(0))) {
    throw KinematicError("lightfront-degenerate momentum");
  }
  const Complex eps_p = minkowski_dot(polarization_, p);
  const double e = electron_charge;
  return (4.0 * e * (eps_p * cumulative_amplitude(phi)).real() - e * e * cumulative_field_squared(phi)) / (2.0 * pk);
}

PhaseCoefficients phase_coefficients(const LaserPulse& pulse, const FourVector& p0,
                                     const FourVector& emitted_before, const FourVector& emitted_after)
{
  const FourVector k = pulse.wave_vector();
  const double scale = std::abs(minkowski_dot(k, p0));

  struct Partial
  {
    double h;
    Complex zeta;
    double upsilon;
  };
  auto partial = [&](const FourVector& q) -> Partial {
    if (q.isZero(0.0)) return {0.0, minkowski_dot(pulse.polarization(), p0) / minkowski_dot(k, p0), 1.0 / minkowski_dot(k, p0)};
    const FourVector rest = p0 - q;
    const double denom = minkowski_dot(k, rest);
    if (std::abs(denom) <= 1e-12 * scale) throw KinematicError("collinear lightfront singularity");
    return {(minkowski_dot(p0, q) - 0.5 * minkowski_square(q)) / denom,
            minkowski_dot(pulse.polarization(), rest) / denom, 1.0 / denom};
  };

  const Partial before = partial(emitted_before);
  const Partial after = partial(emitted_after);
  return {after.h - before.h, after.zeta - before.zeta, after.upsilon - before.upsilon};
}

double phase_function(const LaserPulse& pulse, const PhaseCoefficients& c, double phi)
{
  const double e = electron_charge;
  return c.kappa * phi + 2.0 * e * (c.zeta * pulse.cumulative_amplitude(phi)).real() -
         0.5 * e * e * c.upsilon * pulse.cumulative_field_squared(phi);
}

double phase_derivative(const LaserPulse& pulse, const PhaseCoefficients& c, double phi)
{
  const double e = electron_charge;
  return c.kappa + 2.0 * e * (c.zeta * pulse.envelope_amplitude(phi)).real() -
         0.5 * e * e * c.upsilon * pulse.field_squared(phi);
}

}  // namespace dcs
