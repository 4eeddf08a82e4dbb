#include "dcs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcs {

namespace {

const std::array<Eigen::Matrix2cd, 4>& pauli()
{
  static const std::array<Eigen::Matrix2cd, 4> s = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -imag_unit, imag_unit, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b)
{
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

void require_normalized(const Eigen::Matrix4cd& rho)
{
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw std::invalid_argument("density matrix must be normalized");
}

double photon_energy_product(const ScatteringGeometry& geometry)
{
  double product = 1.0;
  for (const auto& ph : geometry.photons()) product *= ph.omega;
  return product;
}

}  // namespace

const char* basis_name(PolarizationBasis b)
{
  switch (b) {
    case PolarizationBasis::emission: return "01";
    case PolarizationBasis::hv: return "HV";
    case PolarizationBasis::lr: return "LR";
  }
  return "?";
}

double two_photon_prefactor(const ScatteringGeometry& geometry)
{
  if (geometry.photon_count() != 2) throw std::invalid_argument("two-photon prefactor requires two photons");
  const FourVector k = geometry.pulse().wave_vector();
  return photon_energy_product(geometry) /
         (16.0 * std::pow(2.0 * std::numbers::pi, 6) * minkowski_dot(geometry.initial_momentum(), k) *
          minkowski_dot(geometry.final_momentum(), k));
}

double single_photon_prefactor(const ScatteringGeometry& geometry)
{
  if (geometry.photon_count() != 1) throw std::invalid_argument("single-photon prefactor requires one photon");
  const FourVector k = geometry.pulse().wave_vector();
  return photon_energy_product(geometry) /
         (8.0 * std::pow(2.0 * std::numbers::pi, 3) * minkowski_dot(geometry.initial_momentum(), k) *
          minkowski_dot(geometry.final_momentum(), k));
}

TwoPhotonDensityMatrix density_matrix(const ScatteringGeometry& geometry, const AmplitudeTable& amplitudes,
                                      Channel channel)
{
  TwoPhotonDensityMatrix out;
  out.channel = channel;
  out.basis = PolarizationBasis::emission;
  for (int s0 = 0; s0 < 2; ++s0) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Eigen::Vector4cd m;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) m(2 * a + b) = amplitudes(a, b, s0, s2);
      }
      out.rho += m * m.adjoint();
    }
  }
  out.rho *= 0.5 * two_photon_prefactor(geometry);
  return out;
}

double emission_probability(const ScatteringGeometry& geometry, const AmplitudeTable& amplitudes)
{
  double sum = 0.0;
  for (const auto& v : amplitudes.values) sum += std::norm(v);
  return 0.5 * two_photon_prefactor(geometry) * sum;
}

Eigen::Matrix2cd single_photon_density_matrix(const SingleCompton& compton)
{
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (auto s0 : both_spins) {
    for (auto s1 : both_spins) {
      const Eigen::Vector2cd m(compton.amplitude(0, s0, s1), compton.amplitude(1, s0, s1));
      rho += m * m.adjoint();
    }
  }
  rho *= 0.5 * single_photon_prefactor(compton.geometry());
  return rho;
}

Eigen::Matrix2cd rotation_to_hv(double phi)
{
  Eigen::Matrix2cd r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

Eigen::Matrix2cd circular_map()
{
  Eigen::Matrix2cd u;
  u << 1.0, 1.0, imag_unit, -imag_unit;
  return u / std::sqrt(2.0);
}

Eigen::Matrix2cd basis_change(PolarizationBasis from, PolarizationBasis to, const Photon& photon)
{
  if (from == to) return Eigen::Matrix2cd::Identity();
  if (!(photon.theta < 0.5 * std::numbers::pi)) {
    throw std::domain_error("forward-hemisphere projection undefined");
  }
  // Coordinates: c_hv = R c_01, c_lr = U^dagger c_hv.
  auto to_hv = [&](PolarizationBasis b) -> Eigen::Matrix2cd {
    switch (b) {
      case PolarizationBasis::emission: return rotation_to_hv(photon.phi);
      case PolarizationBasis::hv: return Eigen::Matrix2cd::Identity();
      case PolarizationBasis::lr: return circular_map();
    }
    throw std::logic_error("unknown basis");
  };
  // Every map to HV is unitary, so its inverse is the adjoint.
  return to_hv(to).adjoint() * to_hv(from);
}

TwoPhotonDensityMatrix basis_transform(const TwoPhotonDensityMatrix& rho, PolarizationBasis target,
                                       const Photon& photon1, const Photon& photon2)
{
  const Eigen::Matrix4cd t = kron(basis_change(rho.basis, target, photon1), basis_change(rho.basis, target, photon2));
  TwoPhotonDensityMatrix out = rho;
  out.rho = t * rho.rho * t.adjoint();
  out.basis = target;
  return out;
}

Eigen::Matrix2cd basis_transform(const Eigen::Matrix2cd& rho, PolarizationBasis from, PolarizationBasis to,
                                 const Photon& photon)
{
  const Eigen::Matrix2cd t = basis_change(from, to, photon);
  return t * rho * t.adjoint();
}

Eigen::Matrix4cd normalized(const Eigen::Matrix4cd& rho)
{
  const double tr = rho.trace().real();
  if (!(tr >= trace_guard)) throw std::domain_error("density matrix trace below normalization guard");
  return rho / tr;
}

Eigen::Matrix2cd normalized(const Eigen::Matrix2cd& rho)
{
  const double tr = rho.trace().real();
  if (!(tr >= trace_guard)) throw std::domain_error("density matrix trace below normalization guard");
  return rho / tr;
}

namespace {

// Square roots of the eigenvalues of rho rho~, descending. They are the
// singular values of sqrt(rho) sqrt(rho~) with sqrt(rho~) = F sqrt(rho)* F,
// which avoids taking square roots of rounding-level eigenvalues.
Eigen::Vector4d spin_flip_roots(const Eigen::Matrix4cd& rho_normalized)
{
  const Eigen::Matrix4cd hermitian = 0.5 * (rho_normalized + rho_normalized.adjoint());
  const Eigen::Matrix4cd flip = kron(pauli()[2], pauli()[2]);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rho_eig(hermitian);
  const Eigen::Vector4d root = rho_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sqrt_rho = rho_eig.eigenvectors() * root.cast<Complex>().asDiagonal() *
                                    rho_eig.eigenvectors().adjoint();
  const Eigen::Matrix4cd product = sqrt_rho * flip * sqrt_rho.conjugate() * flip;
  return Eigen::JacobiSVD<Eigen::Matrix4cd>(product).singularValues();
}

}  // namespace

std::array<double, 4> spin_flip_eigenvalues(const Eigen::Matrix4cd& rho_normalized)
{
  const Eigen::Vector4d roots = spin_flip_roots(rho_normalized);
  return {roots(0) * roots(0), roots(1) * roots(1), roots(2) * roots(2), roots(3) * roots(3)};
}

double concurrence(const Eigen::Matrix4cd& rho_normalized)
{
  require_normalized(rho_normalized);
  const Eigen::Vector4d r = spin_flip_roots(rho_normalized);
  return std::clamp(r(0) - r(1) - r(2) - r(3), 0.0, 1.0);
}

double fidelity(const Eigen::Matrix4cd& rho_normalized)
{
  require_normalized(rho_normalized);
  const double sum = spin_flip_roots(rho_normalized).sum();
  return sum * sum;
}

std::array<Eigen::Matrix2cd, 4> stokes_operators(PolarizationBasis basis)
{
  const auto& s = pauli();
  switch (basis) {
    case PolarizationBasis::hv: return {s[0], s[3], s[1], s[2]};
    case PolarizationBasis::lr: return s;
    case PolarizationBasis::emission: break;
  }
  throw std::invalid_argument("Stokes operators are defined in the HV or LR basis");
}

StokesTensor stokes_tensor(const Eigen::Matrix4cd& rho_normalized, PolarizationBasis basis)
{
  require_normalized(rho_normalized);
  const auto ops = stokes_operators(basis);
  StokesTensor s;
  for (int l1 = 0; l1 < 4; ++l1) {
    for (int l2 = 0; l2 < 4; ++l2) s(l1, l2) = (rho_normalized * kron(ops[l1], ops[l2])).trace().real();
  }
  return s;
}

double single_photon_stokes(const Eigen::Matrix2cd& rho_normalized, PolarizationBasis basis, int l)
{
  if (l < 0 || l > 3) throw std::invalid_argument("Stokes index must be 0..3");
  return (rho_normalized * stokes_operators(basis)[l]).trace().real();
}

double degree_of_polarization(const Eigen::Matrix2cd& rho_normalized, PolarizationBasis basis)
{
  double sum = 0.0;
  for (int l = 1; l < 4; ++l) sum += std::pow(single_photon_stokes(rho_normalized, basis, l), 2);
  return std::sqrt(sum);
}

double two_entangled_degree(const StokesTensor& s)
{
  const double sum = s.bottomRightCorner<3, 3>().squaredNorm();
  return std::sqrt(std::max(0.0, 0.5 * (sum - 1.0)));
}

Eigen::Matrix2cd partial_trace(const Eigen::Matrix4cd& rho, int keep)
{
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int t = 0; t < 2; ++t) {
        out(i, j) += keep == 1 ? rho(2 * i + t, 2 * j + t) : rho(2 * t + i, 2 * t + j);
      }
    }
  }
  if (keep != 1 && keep != 2) throw std::invalid_argument("partial_trace keeps photon 1 or 2");
  return out;
}

}  // namespace dcs
