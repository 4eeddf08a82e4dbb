#include "dcs/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dcs;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector4cd;

namespace {

constexpr double pi = std::numbers::pi;

Matrix4cd pure(const Vector4cd& v) { return v * v.adjoint(); }

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b)
{
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix4cd random_state(std::mt19937_64& rng)
{
  std::normal_distribution<double> n;
  Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(n(rng), n(rng));
  const Matrix4cd rho = g * g.adjoint();
  return rho / rho.trace();
}

const double r = 1.0 / std::sqrt(2.0);

struct ReferencePoint
{
  ScatteringGeometry geometry;
  DoubleCompton compton;
};

ReferencePoint reference_point(double x1, double x2)
{
  const double gamma0 = 70.71244595191452;
  const double scale = 4.0 * gamma0 * gamma0 * 1e-5;
  ScatteringGeometry g(LaserPulse::linear(0.1, 1e-5, 40.0), electron_momentum(gamma0),
                       {make_photon(x1 * scale, 1.0 / gamma0, 0.5 * pi), make_photon(x2 * scale, 1.0 / gamma0, 1.5 * pi)});
  DoubleCompton c(g);
  return {g, std::move(c)};
}

}  // namespace

TEST_CASE("concurrence of standard states")
{
  CHECK(concurrence(pure(Vector4cd(r, 0.0, 0.0, r))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(pure(Vector4cd(0.0, r, -r, 0.0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(pure(Vector4cd(1.0, 0.0, 0.0, 0.0))) < 1e-14);
  CHECK(concurrence(Matrix4cd::Identity() / 4.0) < 1e-14);
  // a|00> + b|11>: C = 2|ab|.
  const double a = 0.6;
  const double b = 0.8;
  CHECK(concurrence(pure(Vector4cd(a, 0.0, 0.0, Complex(0.0, b)))) == doctest::Approx(2.0 * a * b).epsilon(1e-12));
}

TEST_CASE("Werner states")
{
  const Matrix4cd singlet = pure(Vector4cd(0.0, r, -r, 0.0));
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    const Matrix4cd w = p * singlet + (1.0 - p) / 4.0 * Matrix4cd::Identity();
    CHECK(std::abs(concurrence(w) - std::max(0.0, (3.0 * p - 1.0) / 2.0)) < 1e-12);
  }
}

TEST_CASE("fidelity and spin-flip eigenvalues")
{
  const Matrix4cd bell = pure(Vector4cd(r, 0.0, 0.0, r));
  const auto l = spin_flip_eigenvalues(bell);
  CHECK(l[0] == doctest::Approx(1.0));
  CHECK(l[1] < 1e-14);
  CHECK(fidelity(bell) == doctest::Approx(1.0));
  CHECK(fidelity(Matrix4cd::Identity() / 4.0) == doctest::Approx(1.0));
}

TEST_CASE("concurrence is invariant under local unitaries")
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int k = 0; k < 20; ++k) {
    const Matrix4cd rho = random_state(rng);
    Matrix2cd ga;
    Matrix2cd gb;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ga(i, j) = Complex(n(rng), n(rng)), gb(i, j) = Complex(n(rng), n(rng));
    const Matrix2cd ua = Eigen::HouseholderQR<Matrix2cd>(ga).householderQ();
    const Matrix2cd ub = Eigen::HouseholderQR<Matrix2cd>(gb).householderQ();
    const Matrix4cd u = kron(ua, ub);
    CHECK(std::abs(concurrence(u * rho * u.adjoint()) - concurrence(rho)) < 1e-12);
  }
}

TEST_CASE("Stokes tensors of fixed points")
{
  const StokesTensor hh = stokes_tensor(pure(Vector4cd(1.0, 0.0, 0.0, 0.0)), PolarizationBasis::hv);
  CHECK(hh(0, 0) == doctest::Approx(1.0));
  CHECK(hh(1, 1) == doctest::Approx(1.0));
  CHECK(hh(1, 0) == doctest::Approx(1.0));
  CHECK(std::abs(hh(2, 2)) < 1e-15);

  const StokesTensor singlet = stokes_tensor(pure(Vector4cd(0.0, r, -r, 0.0)), PolarizationBasis::hv);
  for (int l = 1; l <= 3; ++l) CHECK(singlet(l, l) == doctest::Approx(-1.0));
  CHECK(two_entangled_degree(singlet) == doctest::Approx(1.0));
  CHECK(two_entangled_degree(hh) < 1e-7);

  // |LL> in the LR basis is circular for both photons.
  const StokesTensor ll = stokes_tensor(pure(Vector4cd(1.0, 0.0, 0.0, 0.0)), PolarizationBasis::lr);
  CHECK(ll(3, 3) == doctest::Approx(1.0));
  CHECK(std::abs(ll(1, 1)) < 1e-15);

  // The LR operators are the HV ones mapped through U, so the tensor is basis independent.
  std::mt19937_64 rng(17);
  const Matrix4cd hv = random_state(rng);
  const Matrix4cd u = kron(circular_map(), circular_map());
  const Matrix4cd lr = u.adjoint() * hv * u;
  CHECK((stokes_tensor(hv, PolarizationBasis::hv) - stokes_tensor(lr, PolarizationBasis::lr)).norm() < 1e-13);
  CHECK_THROWS_AS(stokes_operators(PolarizationBasis::emission), std::invalid_argument);
}

TEST_CASE("single-photon Stokes parameters in both bases")
{
  const Matrix2cd h = (Matrix2cd() << 1.0, 0.0, 0.0, 0.0).finished();
  CHECK(single_photon_stokes(h, PolarizationBasis::hv, 1) == doctest::Approx(1.0));
  CHECK(degree_of_polarization(h, PolarizationBasis::hv) == doctest::Approx(1.0));
  CHECK(degree_of_polarization(Matrix2cd::Identity() / 2.0, PolarizationBasis::hv) < 1e-15);
  // |L> = (|H> + i|V>)/sqrt2 is circular: s3 = +1 in HV.
  Eigen::Vector2cd left(r, Complex(0.0, r));
  const Matrix2cd rho_l = left * left.adjoint();
  CHECK(single_photon_stokes(rho_l, PolarizationBasis::hv, 3) == doctest::Approx(1.0));
  const Matrix2cd in_lr = circular_map().adjoint() * rho_l * circular_map();
  CHECK(std::abs(in_lr(0, 0) - 1.0) < 1e-15);
  CHECK_THROWS_AS(single_photon_stokes(h, PolarizationBasis::hv, 4), std::invalid_argument);
}

TEST_CASE("basis changes compose and preserve concurrence and trace")
{
  const Photon q1 = make_photon(0.1, 0.02, 0.7);
  const Photon q2 = make_photon(0.2, 0.01, 2.0);
  std::mt19937_64 rng(5);
  const TwoPhotonDensityMatrix rho{random_state(rng), PolarizationBasis::emission, Channel::off};
  const TwoPhotonDensityMatrix hv = basis_transform(rho, PolarizationBasis::hv, q1, q2);
  const TwoPhotonDensityMatrix lr = basis_transform(hv, PolarizationBasis::lr, q1, q2);
  const TwoPhotonDensityMatrix back = basis_transform(lr, PolarizationBasis::emission, q1, q2);
  CHECK((back.rho - rho.rho).norm() < 1e-13);
  CHECK(lr.basis == PolarizationBasis::lr);
  CHECK(std::abs(lr.rho.trace() - 1.0) < 1e-13);
  CHECK(concurrence(hv.rho) == doctest::Approx(concurrence(rho.rho)).epsilon(1e-12));

  // Emission basis rotates into HV by the azimuth.
  const Matrix2cd t = basis_change(PolarizationBasis::emission, PolarizationBasis::hv, q1);
  CHECK((t - rotation_to_hv(q1.phi)).norm() < 1e-15);
  CHECK((t.adjoint() * t - Matrix2cd::Identity()).norm() < 1e-15);

  const Photon forward = make_photon(0.1, 0.5 * pi, 0.0);
  CHECK_THROWS_AS(basis_transform(rho, PolarizationBasis::hv, forward, q2), std::domain_error);
}

TEST_CASE("partial traces and normalization")
{
  std::mt19937_64 rng(11);
  const Matrix4cd rho = random_state(rng);
  const Matrix2cd a = partial_trace(rho, 1);
  const Matrix2cd b = partial_trace(rho, 2);
  CHECK(std::abs(a.trace() - 1.0) < 1e-14);
  CHECK(std::abs(b.trace() - 1.0) < 1e-14);
  const Matrix2cd x = (Matrix2cd() << 0.7, 0.1, 0.1, 0.3).finished();
  const Matrix2cd y = (Matrix2cd() << 0.4, Complex(0.0, 0.2), Complex(0.0, -0.2), 0.6).finished();
  CHECK((partial_trace(kron(x, y), 1) - x).norm() < 1e-15);
  CHECK((partial_trace(kron(x, y), 2) - y).norm() < 1e-15);
  CHECK_THROWS_AS(partial_trace(rho, 3), std::invalid_argument);

  CHECK(std::abs(normalized(Matrix4cd(3.0 * rho)).trace() - 1.0) < 1e-14);
  CHECK_THROWS_AS(normalized(Matrix4cd::Zero().eval()), std::domain_error);
  CHECK_THROWS_AS(normalized(Matrix2cd::Zero().eval()), std::domain_error);
  CHECK_THROWS_AS(concurrence(Matrix4cd(2.0 * rho)), std::invalid_argument);
  CHECK_THROWS_AS(fidelity(Matrix4cd(2.0 * rho)), std::invalid_argument);
}

TEST_CASE("two-photon density matrix is a physical state with the dual-path trace")
{
  const ReferencePoint p = reference_point(0.45, 0.8);
  for (Channel channel : {Channel::off, Channel::on, Channel::total}) {
    const AmplitudeTable table = p.compton.table(channel);
    const TwoPhotonDensityMatrix rho = density_matrix(p.geometry, table, channel);
    CHECK(rho.basis == PolarizationBasis::emission);
    CHECK((rho.rho - rho.rho.adjoint()).norm() <= 1e-14 * rho.rho.norm());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> eig(rho.rho);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * rho.rho.trace().real());
    CHECK(rho.rho.trace().real() == doctest::Approx(emission_probability(p.geometry, table)).epsilon(1e-10));
  }
  CHECK(two_photon_prefactor(p.geometry) > 0.0);
}

TEST_CASE("on-shell emission is nearly unentangled at the reference point")
{
  const ReferencePoint p = reference_point(0.45, 0.8);
  const TwoPhotonDensityMatrix rho = density_matrix(p.geometry, p.compton.table(Channel::on), Channel::on);
  CHECK(concurrence(normalized(rho.rho)) < 1e-2);
}

TEST_CASE("single-photon density matrix")
{
  const double gamma0 = 70.71244595191452;
  const Photon q = make_photon(0.1, 1.0 / gamma0, 0.3);
  const ScatteringGeometry geometry(LaserPulse::linear(0.1, 1e-5, 40.0), electron_momentum(gamma0), {q});
  const SingleCompton compton(geometry);
  const Matrix2cd rho = single_photon_density_matrix(compton);
  CHECK((rho - rho.adjoint()).norm() <= 1e-14 * rho.norm());
  CHECK(rho.trace().real() > 0.0);
  CHECK(degree_of_polarization(normalized(basis_transform(rho, PolarizationBasis::emission, PolarizationBasis::hv, q)),
                               PolarizationBasis::hv) <= 1.0 + 1e-12);
  CHECK(single_photon_prefactor(geometry) > 0.0);
}
