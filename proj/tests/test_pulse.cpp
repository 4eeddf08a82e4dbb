#include "dcs/errors.hpp"
#include "dcs/pulse.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace dcs;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double adaptive(F&& f, double a, double b)
{
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

}  // namespace

TEST_CASE("polarization normalization and amplitude")
{
  for (const LaserPulse& p : {LaserPulse::linear(0.3, 1e-5, 40.0), LaserPulse::circular(0.3, 1e-5, 40.0, true),
                              LaserPulse::circular(0.3, 1e-5, 40.0, false)}) {
    const ComplexFourVector& e = p.polarization();
    CHECK(std::abs(minkowski_dot(e, p.wave_vector())) < 1e-15);
    CHECK(minkowski_dot(e, ComplexFourVector(e.conjugate())).real() == doctest::Approx(-1.0));
    CHECK(p.amplitude() == doctest::Approx(0.3 / (std::sqrt(2.0) * std::abs(electron_charge))));
    CHECK(p.charge_amplitude() < 0.0);
  }
  CHECK(std::abs(minkowski_dot(LaserPulse::circular(0.3, 1e-5, 40.0, true).polarization(),
                               LaserPulse::circular(0.3, 1e-5, 40.0, true).polarization())) < 1e-15);
}

TEST_CASE("field values follow the cos^2 envelope and vanish outside the pulse")
{
  const LaserPulse p = LaserPulse::linear(0.5, 1e-5, 20.0);
  const double a0 = p.amplitude();
  for (double phi : {-7.3, -1.0, 0.0, 2.5, 9.9}) {
    const double env = std::pow(std::cos(pi * phi / 20.0), 2);
    CHECK(std::abs(p.envelope_amplitude(phi) - a0 * env * std::polar(1.0, -phi)) < 1e-14);
    // Linear polarization along x: A_B = 2 A0 env cos(phi) x.
    CHECK(p.field_value(phi)(1) == doctest::Approx(2.0 * a0 * env * std::cos(phi)));
    CHECK(p.field_squared(phi) <= 0.0);
    CHECK(p.field_squared(phi) == doctest::Approx(-4.0 * a0 * a0 * env * env * std::cos(phi) * std::cos(phi)));
  }
  CHECK(p.field_value(10.5).norm() == 0.0);
  CHECK(p.field_value(-10.5).norm() == 0.0);

  // Circular polarization has a constant |A|^2 under the envelope.
  const LaserPulse c = LaserPulse::circular(0.5, 1e-5, 20.0, true);
  for (double phi : {-3.0, 0.0, 1.7}) {
    const double env = std::pow(std::cos(pi * phi / 20.0), 2);
    CHECK(c.field_squared(phi) == doctest::Approx(-2.0 * a0 * a0 * env * env));
  }
}

TEST_CASE("closed-form cumulative integrals agree with adaptive quadrature")
{
  for (const LaserPulse& p : {LaserPulse::linear(0.7, 1e-5, 30.0), LaserPulse::circular(0.7, 1e-5, 2.0 * pi, false)}) {
    const double a = p.phase_begin();
    for (double phi : {a + 0.1, -2.0, 0.0, 1.3, p.phase_end(), p.phase_end() + 5.0}) {
      const double upper = std::min(phi, p.phase_end());
      const double re = adaptive([&](double t) { return p.envelope_amplitude(t).real(); }, a, upper);
      const double im = adaptive([&](double t) { return p.envelope_amplitude(t).imag(); }, a, upper);
      CHECK(std::abs(p.cumulative_amplitude(phi) - Complex(re, im)) < 1e-11 * p.amplitude());
      const double sq = adaptive([&](double t) { return p.field_squared(t); }, a, upper);
      CHECK(p.cumulative_field_squared(phi) == doctest::Approx(sq).epsilon(1e-11));
    }
    CHECK(std::abs(p.cumulative_amplitude(a - 1.0)) == 0.0);
    CHECK(p.cumulative_field_squared(a - 1.0) == 0.0);
  }
}

TEST_CASE("library pulse agrees with the independent test oracle")
{
  const LaserPulse p = LaserPulse::circular(0.4, 1e-5, 17.0, true);
  const oracle::Pulse o(p);
  for (double phi : {-8.0, -3.3, 0.0, 4.1, 8.5, 12.0}) {
    CHECK(std::abs(p.cumulative_amplitude(phi) - o.cumulative_amplitude(phi)) < 1e-13 * p.amplitude());
    CHECK(p.cumulative_field_squared(phi) == doctest::Approx(o.cumulative_field_squared(phi)).epsilon(1e-12));
    CHECK(p.normalized_field_squared()(std::clamp(phi, -8.5, 8.5)).real() ==
          doctest::Approx(o.weight(2, 0, std::clamp(phi, -8.5, 8.5)).real()).epsilon(1e-12));
  }
}

TEST_CASE("exponential sums integrate and multiply exactly")
{
  const ExponentialSum f({{Complex(1.0, 0.5), 2.0}, {0.3, 0.0}});
  const ExponentialSum g({{2.0, -2.0}});
  const double x = 0.7;
  CHECK(std::abs((f * g)(x) - f(x) * g(x)) < 1e-14);
  CHECK(std::abs((f + g)(x) - (f(x) + g(x))) < 1e-14);
  CHECK(std::abs(f.conjugate()(x) - std::conj(f(x))) < 1e-14);
  const Complex expected = Complex(1.0, 0.5) * (std::exp(Complex(0.0, 2.0 * x)) - 1.0) / Complex(0.0, 2.0) + 0.3 * x;
  CHECK(std::abs(f.integral(0.0, x) - expected) < 1e-14);
  CHECK(f.max_frequency() == doctest::Approx(2.0));
}

TEST_CASE("phase function is the antiderivative of its derivative")
{
  const LaserPulse p = LaserPulse::linear(0.6, 1e-3, 12.0);
  const FourVector p0(10.0, 0.0, 0.0, std::sqrt(99.0));
  const FourVector q = 0.01 * FourVector(1.0, std::sin(0.05), 0.0, std::cos(0.05));
  const PhaseCoefficients c = phase_coefficients(p, p0, FourVector::Zero(), q);
  const double a = p.phase_begin();
  for (double phi : {-4.0, 0.0, 5.5}) {
    const double integral = adaptive([&](double t) { return phase_derivative(p, c, t); }, a, phi);
    CHECK(phase_function(p, c, phi) - phase_function(p, c, a) == doctest::Approx(integral).epsilon(1e-11));
  }
  // kappa is the lightfront momentum transfer k.(p0 - q) bookkeeping: kappa = (p0.q) / k.(p0 - q).
  const FourVector k = p.wave_vector();
  CHECK(c.kappa == doctest::Approx(minkowski_dot(p0, q) / minkowski_dot(k, FourVector(p0 - q))));
}

TEST_CASE("classical phase combines the linear and quadratic field integrals")
{
  const LaserPulse p = LaserPulse::circular(0.5, 1e-4, 20.0, true);
  const FourVector p0(5.0, 0.1, -0.2, std::sqrt(24.0 - 0.05));
  const double pk = minkowski_dot(p0, p.wave_vector());
  const double e = electron_charge;
  const double expected = adaptive(
      [&](double t) {
        const FourVector a = p.field_value(t);
        return (2.0 * e * minkowski_dot(a, p0) - e * e * minkowski_square(a)) / (2.0 * pk);
      },
      p.phase_begin(), 3.0);
  CHECK(p.classical_phase(p0, 3.0) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("invalid pulses are configuration errors")
{
  CHECK_THROWS_AS(LaserPulse::linear(-0.1, 1e-5, 40.0), ConfigError);
  CHECK_THROWS_AS(LaserPulse::linear(0.1, 0.0, 40.0), ConfigError);
  CHECK_THROWS_AS(LaserPulse::linear(0.1, 1e-5, -1.0), ConfigError);
  CHECK_THROWS_AS(LaserPulse(0.1, 1e-5, 40.0, ComplexFourVector(0.0, 0.0, 0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(LaserPulse(0.1, 1e-5, 40.0, ComplexFourVector(0.0, 2.0, 0.0, 0.0)), ConfigError);
}

TEST_CASE("lightfront-collinear emission is a kinematic error")
{
  const LaserPulse p = LaserPulse::linear(0.1, 1e-5, 40.0);
  const FourVector p0(2.0, 0.0, 0.0, std::sqrt(3.0));
  // A photon along +z carrying all of p0's lightfront momentum leaves k.(p0 - q) = 0.
  const double half = 0.5 * (p0(0) + p0(3));
  const FourVector q(half, 0.0, 0.0, half);
  CHECK_THROWS_AS(phase_coefficients(p, p0, FourVector::Zero(), q), KinematicError);
}
