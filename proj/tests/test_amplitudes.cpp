#include "dcs/amplitudes.hpp"
#include "dcs/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

using namespace dcs;

namespace {

double max_abs(const AmplitudeTable& t)
{
  double m = 0.0;
  for (const Complex& v : t.values) m = std::max(m, std::abs(v));
  return m;
}

ComplexFourVector as_complex(const FourVector& v) { return v.cast<Complex>(); }

struct Point
{
  LaserPulse pulse;
  Photon photon1;
  Photon photon2;
};

Point reference_point(double x1, double x2, double theta1, double phi1, double theta2, double phi2, bool linear = true)
{
  const double gamma0 = 70.71244595191452;
  const double omega0 = 1e-5;
  const double scale = 4.0 * gamma0 * gamma0 * omega0;
  return {linear ? LaserPulse::linear(0.1, omega0, 40.0) : LaserPulse::circular(0.1, omega0, 40.0, true),
          make_photon(x1 * scale, theta1 / gamma0, phi1), make_photon(x2 * scale, theta2 / gamma0, phi2)};
}

const FourVector p0 = electron_momentum(70.71244595191452);

}  // namespace

TEST_CASE("the U table has sixteen distinct terms with valid field indices")
{
  std::set<std::string> names;
  for (const UTerm& t : u_terms()) {
    names.insert(t.name);
    for (auto [j, l] : {std::pair{t.j1, t.l1}, std::pair{t.j2, t.l2}}) {
      const bool valid = (j == 0 && l == 0) || (j == 1 && std::abs(l) == 1) || (j == 2 && l == 0);
      CHECK(valid);
    }
  }
  CHECK(names.size() == 16);
}

TEST_CASE("vertex pieces reduce to the free vertex without a field")
{
  const LaserPulse pulse = LaserPulse::linear(0.1, 1e-5, 40.0);
  const Photon q = make_photon(0.01, 0.02, 0.0);
  const ScatteringGeometry geometry(pulse, p0, {q});
  const VertexFactors v = vertex_factors(pulse, as_complex(q.polarization(0)), p0, geometry.final_momentum());
  CHECK((v.v0 - slash(q.polarization(0))).norm() < 1e-14);
  CHECK((v.piece(1, -1) - v.v1).norm() == 0.0);
  CHECK((v.piece(1, 1) - v.v1c).norm() == 0.0);
  // V2 is proportional to k-slash, which is nilpotent.
  CHECK((v.v2 * v.v2).norm() < 1e-12 * v.v2.norm() * v.v2.norm() + 1e-300);
  CHECK_THROWS_AS(v.piece(2, 1), std::invalid_argument);
}

TEST_CASE("Ward identity holds for both photons in the total channel")
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 3; ++n) {
    const Point pt = reference_point(0.1 + u(rng), 0.1 + u(rng), 2.0 * u(rng), 6.28 * u(rng), 2.0 * u(rng),
                                  6.28 * u(rng), n != 1);
    const ScatteringGeometry geometry(pt.pulse, p0, {pt.photon1, pt.photon2});
    const DoubleCompton compton(geometry);
    const double reference = max_abs(compton.table(Channel::total));
    const ComplexFourVector k1 = as_complex(pt.photon1.momentum()) / pt.photon1.omega;
    const ComplexFourVector k2 = as_complex(pt.photon2.momentum()) / pt.photon2.omega;
    for (int a : {0, 1}) {
      for (Spin s0 : both_spins) {
        for (Spin s2 : both_spins) {
          CHECK(std::abs(compton.amplitude(Channel::total, k1, as_complex(pt.photon2.polarization(a)), s0, s2)) <
                1e-8 * reference);
          CHECK(std::abs(compton.amplitude(Channel::total, as_complex(pt.photon1.polarization(a)), k2, s0, s2)) <
                1e-8 * reference);
        }
      }
    }
  }
}

TEST_CASE("swapping the two photons permutes the amplitude table")
{
  const Point pt = reference_point(0.35, 0.7, 1.0, 0.5 * 3.14159, 1.3, 1.5 * 3.14159);
  const ScatteringGeometry ab(pt.pulse, p0, {pt.photon1, pt.photon2});
  const ScatteringGeometry ba(pt.pulse, p0, {pt.photon2, pt.photon1});
  const DoubleCompton c_ab(ab);
  const DoubleCompton c_ba(ba);
  for (Channel channel : {Channel::off, Channel::on, Channel::total}) {
    const AmplitudeTable t_ab = c_ab.table(channel);
    const AmplitudeTable t_ba = c_ba.table(channel);
    const double scale = max_abs(t_ab);
    for (int a : {0, 1})
      for (int b : {0, 1})
        for (int s0 : {0, 1})
          for (int s2 : {0, 1}) CHECK(std::abs(t_ab(a, b, s0, s2) - t_ba(b, a, s0, s2)) < 1e-9 * scale);
  }
}

TEST_CASE("on-shell channel factorizes into single-vertex amplitudes")
{
  const Point pt = reference_point(0.5, 0.4, 0.8, 1.0, 1.2, 4.0, false);
  const ScatteringGeometry geometry(pt.pulse, p0, {pt.photon1, pt.photon2});
  const DoubleCompton compton(geometry);
  const double scale = max_abs(compton.table(Channel::on));
  for (int a : {0, 1}) {
    for (int b : {0, 1}) {
      const ComplexFourVector e1 = as_complex(pt.photon1.polarization(a));
      const ComplexFourVector e2 = as_complex(pt.photon2.polarization(b));
      for (Spin s0 : both_spins) {
        for (Spin s2 : both_spins) {
          CHECK(std::abs(compton.on_shell_factorized(e1, e2, s0, s2) - compton.amplitude(Channel::on, e1, e2, s0, s2)) <
                1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("channels add up to the total amplitude")
{
  const Point pt = reference_point(0.6, 0.3, 1.0, 0.2, 0.5, 3.0);
  const ScatteringGeometry geometry(pt.pulse, p0, {pt.photon1, pt.photon2});
  const DoubleCompton compton(geometry);
  const AmplitudeTable off = compton.table(Channel::off);
  const AmplitudeTable on = compton.table(Channel::on);
  const AmplitudeTable total = compton.table(Channel::total);
  const double scale = max_abs(total);
  for (std::size_t i = 0; i < total.values.size(); ++i) {
    CHECK(std::abs(off.values[i] + on.values[i] - total.values[i]) < 1e-10 * scale);
  }
}

TEST_CASE("single-photon amplitude obeys the Ward identity and matches the vertex form")
{
  const LaserPulse pulse = LaserPulse::circular(0.1, 1e-5, 40.0, false);
  const Photon q = make_photon(0.15, 0.8 / 70.7, 0.4);
  const ScatteringGeometry geometry(pulse, p0, {q});
  const SingleCompton compton(geometry);
  double reference = 0.0;
  for (int a : {0, 1})
    for (Spin s0 : both_spins)
      for (Spin s1 : both_spins) reference = std::max(reference, std::abs(compton.amplitude(a, s0, s1)));
  CHECK(reference > 0.0);
  const ComplexFourVector k = as_complex(q.momentum()) / q.omega;
  for (Spin s0 : both_spins)
    for (Spin s1 : both_spins) CHECK(std::abs(compton.amplitude(k, s0, s1)) < 1e-8 * reference);
}

TEST_CASE("amplitude classes reject the wrong photon count")
{
  const LaserPulse pulse = LaserPulse::linear(0.1, 1e-5, 40.0);
  const Photon q = make_photon(0.1, 0.01, 0.0);
  CHECK_THROWS_AS(DoubleCompton(ScatteringGeometry(pulse, p0, {q})), std::invalid_argument);
  CHECK_THROWS_AS(SingleCompton(ScatteringGeometry(pulse, p0, {q, q})), std::invalid_argument);
}
