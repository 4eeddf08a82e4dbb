#include "dcs/algebra.hpp"

#include "dcs/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace dcs {

namespace {

std::array<Eigen::Matrix2cd, 4> pauli_matrices()
{
  std::array<Eigen::Matrix2cd, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -imag_unit, imag_unit, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

std::array<DiracMatrix, 4> build_gamma_matrices()
{
  const auto s = pauli_matrices();
  std::array<DiracMatrix, 4> g;
  for (auto& m : g) m.setZero();
  g[0].topRightCorner<2, 2>() = s[0];
  g[0].bottomLeftCorner<2, 2>() = s[0];
  for (int i = 1; i < 4; ++i) {
    g[i].topRightCorner<2, 2>() = s[i];
    g[i].bottomLeftCorner<2, 2>() = -s[i];
  }
  // gamma^0 gamma^mu^dagger gamma^0 = gamma^mu
  for (const auto& m : g) {
    if (!(g[0] * m.adjoint() * g[0]).isApprox(m, 1e-15)) {
      throw std::logic_error("gamma matrices violate the hermiticity relation");
    }
  }
  return g;
}

}  // namespace

const std::array<DiracMatrix, 4>& gamma_matrices()
{
  static const std::array<DiracMatrix, 4> g = build_gamma_matrices();
  return g;
}

template <typename Scalar>
static DiracMatrix slash_impl(const FourVectorT<Scalar>& a)
{
  const auto& g = gamma_matrices();
  return g[0] * Complex(a(0)) - g[1] * Complex(a(1)) - g[2] * Complex(a(2)) - g[3] * Complex(a(3));
}

DiracMatrix slash(const FourVector& a) { return slash_impl(a); }
DiracMatrix slash(const ComplexFourVector& a) { return slash_impl(a); }

Eigen::Matrix2cd hermitian_sqrt(const Eigen::Matrix2cd& m)
{
  // For 2x2 positive M: sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
  const double det = m.determinant().real();
  const double tr = m.trace().real();
  if (det <= 0.0 || tr <= 0.0) {
    throw std::domain_error("hermitian_sqrt requires a positive-definite matrix");
  }
  const double s = std::sqrt(det);
  return (m + s * Eigen::Matrix2cd::Identity()) / std::sqrt(tr + 2.0 * s);
}

bool is_on_shell(const FourVector& p)
{
  const double m2 = electron_mass * electron_mass;
  // E^2 - |p|^2 carries a rounding floor of order eps * E^2.
  const double tolerance = on_shell_tolerance * m2 + 1e-13 * p(0) * p(0);
  return std::abs(minkowski_square(p) - m2) <= tolerance;
}

DiracSpinor dirac_spinor(const FourVector& p, Spin spin)
{
  if (p(0) <= 0.0 || !is_on_shell(p)) {
    throw KinematicError("spinor requires on-shell momentum");
  }
  const auto s = pauli_matrices();
  Eigen::Matrix2cd p_sigma = p(0) * s[0];
  Eigen::Matrix2cd p_sigma_bar = p(0) * s[0];
  for (int i = 1; i < 4; ++i) {
    p_sigma -= p(i) * s[i];
    p_sigma_bar += p(i) * s[i];
  }
  const Eigen::Vector2cd xi = spin == Spin::up ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);

  DiracSpinor u{Eigen::Vector4cd::Zero(), spin, p};
  // det(p.sigma) = m^2 on shell; using it directly avoids the E^2 - |p|^2
  // cancellation for ultra-relativistic momenta.
  const double norm = 1.0 / std::sqrt(2.0 * (p(0) + electron_mass));
  const Eigen::Matrix2cd id = electron_mass * Eigen::Matrix2cd::Identity();
  u.components.head<2>() = norm * (p_sigma + id) * xi;
  u.components.tail<2>() = norm * (p_sigma_bar + id) * xi;
  return u;
}

AdjointSpinor adjoint(const DiracSpinor& u)
{
  return AdjointSpinor{u.components.adjoint() * gamma_matrices()[0]};
}

}  // namespace dcs
