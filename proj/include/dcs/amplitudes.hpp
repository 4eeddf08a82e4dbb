#pragma once

// Single- and double-Compton amplitudes in a pulsed plane wave.
//
// An emission vertex with (conjugated) photon polarization e* between
// electron momenta p_in -> p_out expands in powers of the field as
//   M(phi) = V0 + e A0 A_1 e^{-i phi} V1 + e A0 A_1 e^{+i phi} V1c + e^2 A0^2 A_2 V2,
//   V0  = e*-slash,
//   V1  = eps k e* / (2 p_out.k) + e* k eps / (2 p_in.k)   (slashed),
//   V1c = V1 with eps -> eps*,
//   V2  = -(e*.k) / (2 (p_in.k)(p_out.k)) k-slash.
// Two-photon amplitudes combine the vertex pieces through the on-shell
// intermediate propagator (U terms, Upsilon integrals) and the
// instantaneous part (D terms, I~ integrals).
//
// Amplitudes are returned as M, the reduced matrix element defined by
// S = (2pi)^3 delta^3(...) i M / (sqrt2 omega0).

#include "dcs/geometry.hpp"
#include "dcs/quadrature.hpp"

#include <array>
#include <memory>

namespace dcs {

/// Field-power pieces of one emission vertex.
struct VertexFactors
{
  DiracMatrix v0;
  DiracMatrix v1;
  DiracMatrix v1c;
  DiracMatrix v2;

  /// Piece multiplying A_j e^{i l phi}: (0,0) -> V0, (1,-1) -> V1, (1,+1) -> V1c, (2,0) -> V2.
  const DiracMatrix& piece(int j, int l) const;
};

VertexFactors vertex_factors(const LaserPulse& pulse, const ComplexFourVector& photon_conj,
                             const FourVector& p_in, const FourVector& p_out);

/// One U-table entry: the Upsilon_{j2 j1}(l2, l1) it multiplies.
struct UTerm
{
  const char* name;
  int j2;
  int l2;
  int j1;
  int l1;
};

/// The sixteen U-table terms: U00, U10, U10c, U01, U01c, U11, U11c, U11', U11'c,
/// U20, U02, U21, U21c, U12, U12c, U22.
const std::array<UTerm, 16>& u_terms();

/// (e A0)^{j2+j1} V2_{j2 l2} (P1-slash + m) V1_{j1 l1}.
DiracMatrix u_matrix(const UTerm& term, const LaserPulse& pulse, const VertexFactors& second,
                     const VertexFactors& first, const FourVector& p1);

/// U-table entry for the geometry's basis polarizations; alpha labels photon 1, beta photon 2.
DiracMatrix u_matrix(const UTerm& term, const ScatteringGeometry& geometry, Permutation order, int alpha, int beta);

enum class DTerm { d0, d1_plus, d1_minus, d2 };

inline constexpr std::array<DTerm, 4> all_d_terms{DTerm::d0, DTerm::d1_plus, DTerm::d1_minus, DTerm::d2};

/// Instantaneous-term matrices; first/second are the conjugated polarizations
/// of the first- and second-emitted photon.
DiracMatrix d_matrix(DTerm term, const LaserPulse& pulse, const ComplexFourVector& first_conj,
                     const ComplexFourVector& second_conj, const FourVector& p0, const FourVector& p2);

DiracMatrix d_matrix(DTerm term, const ScatteringGeometry& geometry, Permutation order, int alpha, int beta);

/// M_{alpha beta}^{sigma0 sigma2}; alpha, beta in {0, 1} label photons 1 and 2.
struct AmplitudeTable
{
  std::array<Complex, 16> values{};

  Complex& operator()(int alpha, int beta, int s0, int s2) { return values[index(alpha, beta, s0, s2)]; }
  Complex operator()(int alpha, int beta, int s0, int s2) const { return values[index(alpha, beta, s0, s2)]; }

  static int index(int alpha, int beta, int s0, int s2) { return ((alpha * 2 + beta) * 2 + s0) * 2 + s2; }
};

inline int spin_index(Spin s) { return s == Spin::up ? 0 : 1; }

/// Phase integrals and momenta for both photon orderings of one spectral point.
class DoubleCompton
{
 public:
  /// `cache`, if given, must hold the geometry's pulse; it is shared across points.
  explicit DoubleCompton(const ScatteringGeometry& geometry, const QuadratureSettings& settings = {},
                         PulseSampleCache* cache = nullptr);

  const ScatteringGeometry& geometry() const { return geometry_; }
  const PhaseIntegrals& integrals(Permutation order) const { return *ordering(order).integrals; }

  /// Amplitude for explicit conjugated polarization vectors (e.g. q_j for gauge checks).
  Complex amplitude(Channel channel, const ComplexFourVector& photon1_conj, const ComplexFourVector& photon2_conj,
                    Spin s0, Spin s2) const;

  /// All polarization/spin entries in the emission-local {0, 1} basis.
  AmplitudeTable table(Channel channel) const;

  /// On-shell amplitude from the product of two single-vertex amplitudes,
  /// summed over the intermediate spin.
  Complex on_shell_factorized(const ComplexFourVector& photon1_conj, const ComplexFourVector& photon2_conj, Spin s0,
                              Spin s2) const;

  /// Single-vertex amplitude of the ordering: n = 1 is p0 -> P1 (spins s_in of
  /// p0, s_out of P1), n = 2 is P1 -> p2.
  Complex vertex_amplitude(Permutation order, int n, const ComplexFourVector& photon_conj, Spin s_in,
                           Spin s_out) const;

  /// Pure-state concurrence of the on-shell amplitude with all electron spins up.
  double on_shell_concurrence_estimate() const;

 private:
  struct Ordering
  {
    std::unique_ptr<PhaseIntegrals> integrals;
    FourVector p1;
    std::array<Complex, 16> upsilon_off{};
    std::array<Complex, 16> upsilon_on{};
    std::array<Complex, 4> i_tilde{};  // order of all_d_terms
  };

  const Ordering& ordering(Permutation order) const { return orderings_[order == Permutation::pi1 ? 0 : 1]; }
  DiracMatrix channel_matrix(Channel channel, const ComplexFourVector& photon1_conj,
                             const ComplexFourVector& photon2_conj) const;

  ScatteringGeometry geometry_;
  std::array<Ordering, 2> orderings_;
  std::array<DiracSpinor, 2> initial_spinors_;
  std::array<AdjointSpinor, 2> final_adjoints_;
};

/// One-photon emission at a single spectral point.
class SingleCompton
{
 public:
  explicit SingleCompton(const ScatteringGeometry& geometry, const QuadratureSettings& settings = {},
                         PulseSampleCache* cache = nullptr);

  const ScatteringGeometry& geometry() const { return geometry_; }
  const PhaseIntegrals& integrals() const { return *integrals_; }

  Complex amplitude(const ComplexFourVector& photon_conj, Spin s0, Spin s1) const;
  Complex amplitude(int alpha, Spin s0, Spin s1) const;

 private:
  ScatteringGeometry geometry_;
  std::unique_ptr<PhaseIntegrals> integrals_;
};

/// -i e ubar_out [ sum_{j,l} (e A0)^j V_{jl} int e^{i g} A_j e^{i l phi} ] u_in.
Complex vertex_amplitude(const PhaseIntegrals& integrals, int n, const LaserPulse& pulse,
                         const VertexFactors& factors, const AdjointSpinor& out, const DiracSpinor& in);

}  // namespace dcs
