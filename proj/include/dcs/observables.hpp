#pragma once

// Photon polarization observables: two-photon density matrices, emission
// probabilities, concurrence, fidelity, basis changes and Stokes parameters.
//
// Tensor-product ordering: photon 1 is the slow index, i.e. the composite
// index of (a, b) is 2a + b, matching AmplitudeTable.

#include "dcs/amplitudes.hpp"

#include <Eigen/Dense>

#include <array>

namespace dcs {

/// Emission-local {0,1}, laser-plane linear {H,V}, or circular {L,R}.
enum class PolarizationBasis { emission, hv, lr };

const char* basis_name(PolarizationBasis b);

struct TwoPhotonDensityMatrix
{
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  PolarizationBasis basis = PolarizationBasis::emission;
  Channel channel = Channel::total;
};

/// Traces below this are treated as no emission; normalized observables are undefined.
inline constexpr double trace_guard = 1e-30;

/// omega1 omega2 / (16 (2pi)^6 (p0.k)(p2.k)).
double two_photon_prefactor(const ScatteringGeometry& geometry);

/// omega / (8 (2pi)^3 (p0.k)(p1.k)).
double single_photon_prefactor(const ScatteringGeometry& geometry);

/// rho = prefactor * (1/2) sum_{s0, s2} M M^dagger in the emission basis.
TwoPhotonDensityMatrix density_matrix(const ScatteringGeometry& geometry, const AmplitudeTable& amplitudes,
                                      Channel channel);

/// d^2W from sum |M|^2 (independent of the density-matrix assembly).
double emission_probability(const ScatteringGeometry& geometry, const AmplitudeTable& amplitudes);

/// Single-photon 2x2 density matrix in the emission basis, trace = d^1W.
Eigen::Matrix2cd single_photon_density_matrix(const SingleCompton& compton);

/// Rotation R(phi) from the emission basis to {H, V}.
Eigen::Matrix2cd rotation_to_hv(double phi);

/// U = [[1, 1], [i, -i]] / sqrt2, columns are |L>, |R> in {H, V}.
Eigen::Matrix2cd circular_map();

/// Per-photon basis change matrix T so that c_target = T c_source.
Eigen::Matrix2cd basis_change(PolarizationBasis from, PolarizationBasis to, const Photon& photon);

/// Change basis of a two-photon density matrix. Throws std::domain_error when
/// a photon is not back-scattered (theta >= pi/2).
TwoPhotonDensityMatrix basis_transform(const TwoPhotonDensityMatrix& rho, PolarizationBasis target,
                                       const Photon& photon1, const Photon& photon2);

Eigen::Matrix2cd basis_transform(const Eigen::Matrix2cd& rho, PolarizationBasis from, PolarizationBasis to,
                                 const Photon& photon);

/// rho / Tr rho; throws std::domain_error below trace_guard.
Eigen::Matrix4cd normalized(const Eigen::Matrix4cd& rho);
Eigen::Matrix2cd normalized(const Eigen::Matrix2cd& rho);

/// Eigenvalues of rho rho~ (descending, clamped at zero), rho~ = (s2 x s2) rho* (s2 x s2).
std::array<double, 4> spin_flip_eigenvalues(const Eigen::Matrix4cd& rho_normalized);

/// Wootters concurrence; throws std::invalid_argument unless Tr rho = 1.
double concurrence(const Eigen::Matrix4cd& rho_normalized);

/// (sum sqrt(lambda_i))^2.
double fidelity(const Eigen::Matrix4cd& rho_normalized);

/// Stokes operators S_0..S_3 in the {H, V} or {L, R} basis.
std::array<Eigen::Matrix2cd, 4> stokes_operators(PolarizationBasis basis);

using StokesTensor = Eigen::Matrix4d;

/// s_{l1 l2} = Tr{rho (S_l1 x S_l2)}; rho must be normalized and in {H,V} or {L,R}.
StokesTensor stokes_tensor(const Eigen::Matrix4cd& rho_normalized, PolarizationBasis basis);

/// s_l = Tr{rho1 S_l} for a normalized single-photon state.
double single_photon_stokes(const Eigen::Matrix2cd& rho_normalized, PolarizationBasis basis, int l);

/// p = sqrt(s1^2 + s2^2 + s3^2).
double degree_of_polarization(const Eigen::Matrix2cd& rho_normalized, PolarizationBasis basis);

/// P = sqrt(max(0, (-1 + sum_{l1,l2 >= 1} s_{l1 l2}^2) / 2)).
double two_entangled_degree(const StokesTensor& s);

/// Reduced state of photon 1 (keep = 1) or photon 2 (keep = 2).
Eigen::Matrix2cd partial_trace(const Eigen::Matrix4cd& rho, int keep);

}  // namespace dcs
