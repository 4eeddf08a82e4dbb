#pragma once

// Minkowski four-vectors, chiral-basis gamma matrices and Dirac spinors.
//
// Natural units, c = hbar = 1, all energies and momenta in units of the
// electron mass. Metric signature (+,-,-,-).

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace dcs {

using Complex = std::complex<double>;

template <typename Scalar>
using FourVectorT = Eigen::Matrix<Scalar, 4, 1>;

using FourVector = FourVectorT<double>;
using ComplexFourVector = FourVectorT<Complex>;
using DiracMatrix = Eigen::Matrix4cd;

inline constexpr double electron_mass = 1.0;
inline constexpr Complex imag_unit{0.0, 1.0};

// Relative tolerance on |p^2 - m^2| / m^2 for a momentum to count as on-shell.
inline constexpr double on_shell_tolerance = 1e-9;

/// Bilinear Minkowski product a^0 b^0 - a.b (no complex conjugation).
template <typename DerivedA, typename DerivedB>
auto minkowski_dot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
  return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
}

template <typename Derived>
auto minkowski_square(const Eigen::MatrixBase<Derived>& a)
{
  return minkowski_dot(a, a);
}

inline FourVector make_four_vector(double t, double x, double y, double z)
{
  return FourVector(t, x, y, z);
}

/// gamma^mu, mu = 0..3, in the chiral (Weyl) basis.
const std::array<DiracMatrix, 4>& gamma_matrices();

/// gamma^mu a_mu.
DiracMatrix slash(const FourVector& a);
DiracMatrix slash(const ComplexFourVector& a);

enum class Spin { up, down };

inline constexpr std::array<Spin, 2> both_spins{Spin::up, Spin::down};

inline double spin_value(Spin s) { return s == Spin::up ? 0.5 : -0.5; }

/// Positive-energy spinor u_sigma(p), normalized to ubar u = 2m.
struct DiracSpinor
{
  Eigen::Vector4cd components;
  Spin spin;
  FourVector momentum;
};

/// Dirac adjoint ubar = u^dagger gamma^0.
struct AdjointSpinor
{
  Eigen::RowVector4cd components;
};

/// |p^2 - m^2| within on_shell_tolerance (plus a rounding floor ~ 1e-13 E^2).
bool is_on_shell(const FourVector& p);

/// Builds u_sigma(p) with sigma the sigma_z eigenvalue in the rest frame.
/// Throws KinematicError unless p is on-shell with positive energy.
DiracSpinor dirac_spinor(const FourVector& p, Spin spin);

AdjointSpinor adjoint(const DiracSpinor& u);

/// ubar M u'.
inline Complex sandwich(const AdjointSpinor& left, const DiracMatrix& m, const DiracSpinor& right)
{
  return (left.components * m * right.components)(0, 0);
}

/// Principal square root of a 2x2 Hermitian positive-definite matrix.
Eigen::Matrix2cd hermitian_sqrt(const Eigen::Matrix2cd& m);

}  // namespace dcs
