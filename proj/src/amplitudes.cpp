#include "dcs/amplitudes.hpp"

#include "dcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcs {

namespace {

constexpr std::array<std::array<int, 2>, 4> weight_indices{{{0, 0}, {1, -1}, {1, 1}, {2, 0}}};

DiracMatrix identity_mass() { return electron_mass * DiracMatrix::Identity(); }

ComplexFourVector basis_polarization(const ScatteringGeometry& geometry, int photon, int index)
{
  // The linear basis is real, so e* = e.
  return geometry.photons()[photon].polarization(index).cast<Complex>();
}

std::shared_ptr<const PulseSamples> samples_for(const LaserPulse& pulse, const std::vector<PhaseCoefficients>& vertices,
                                                const QuadratureSettings& settings, PulseSampleCache* cache)
{
  double f = 0.0;
  for (const auto& c : vertices) f = std::max(f, phase_frequency_bound(pulse, c));
  const int panels = panels_for(pulse, f + weight_frequency_bound(pulse), settings);
  return cache ? cache->get(panels) : sample_pulse(pulse, panels);
}

}  // namespace

const DiracMatrix& VertexFactors::piece(int j, int l) const
{
  if (j == 0 && l == 0) return v0;
  if (j == 1 && l == -1) return v1;
  if (j == 1 && l == 1) return v1c;
  if (j == 2 && l == 0) return v2;
  throw std::invalid_argument("invalid field-weight index (j, l)");
}

VertexFactors vertex_factors(const LaserPulse& pulse, const ComplexFourVector& photon_conj, const FourVector& p_in,
                             const FourVector& p_out)
{
  const FourVector k = pulse.wave_vector();
  const double in_k = minkowski_dot(p_in, k);
  const double out_k = minkowski_dot(p_out, k);
  const DiracMatrix ks = slash(k);
  const DiracMatrix ph = slash(photon_conj);
  const DiracMatrix eps = slash(pulse.polarization());
  const DiracMatrix eps_c = slash(ComplexFourVector(pulse.polarization().conjugate()));

  VertexFactors f;
  f.v0 = ph;
  f.v1 = eps * ks * ph / (2.0 * out_k) + ph * ks * eps / (2.0 * in_k);
  f.v1c = eps_c * ks * ph / (2.0 * out_k) + ph * ks * eps_c / (2.0 * in_k);
  f.v2 = -minkowski_dot(photon_conj, k) / (2.0 * in_k * out_k) * ks;
  return f;
}

const std::array<UTerm, 16>& u_terms()
{
  static const std::array<UTerm, 16> terms{{
      {"U00", 0, 0, 0, 0},
      {"U10", 1, -1, 0, 0},
      {"U10c", 1, 1, 0, 0},
      {"U01", 0, 0, 1, -1},
      {"U01c", 0, 0, 1, 1},
      {"U11", 1, -1, 1, -1},
      {"U11c", 1, 1, 1, 1},
      {"U11'", 1, 1, 1, -1},
      {"U11'c", 1, -1, 1, 1},
      {"U20", 2, 0, 0, 0},
      {"U02", 0, 0, 2, 0},
      {"U21", 2, 0, 1, -1},
      {"U21c", 2, 0, 1, 1},
      {"U12", 1, -1, 2, 0},
      {"U12c", 1, 1, 2, 0},
      {"U22", 2, 0, 2, 0},
  }};
  return terms;
}

DiracMatrix u_matrix(const UTerm& term, const LaserPulse& pulse, const VertexFactors& second,
                     const VertexFactors& first, const FourVector& p1)
{
  const double scale = std::pow(pulse.charge_amplitude(), term.j2 + term.j1);
  return scale * second.piece(term.j2, term.l2) * (slash(p1) + identity_mass()) * first.piece(term.j1, term.l1);
}

DiracMatrix u_matrix(const UTerm& term, const ScatteringGeometry& geometry, Permutation order, int alpha, int beta)
{
  const std::array<int, 2> pol{alpha, beta};
  const int first = geometry.emitted_at(order, 1);
  const int second = geometry.emitted_at(order, 2);
  const FourVector& p1 = geometry.intermediate_momentum(order);
  const auto vf1 = vertex_factors(geometry.pulse(), basis_polarization(geometry, first, pol[first]),
                                  geometry.initial_momentum(), p1);
  const auto vf2 = vertex_factors(geometry.pulse(), basis_polarization(geometry, second, pol[second]), p1,
                                  geometry.final_momentum());
  return u_matrix(term, geometry.pulse(), vf2, vf1, p1);
}

DiracMatrix d_matrix(DTerm term, const LaserPulse& pulse, const ComplexFourVector& first_conj,
                     const ComplexFourVector& second_conj, const FourVector& p0, const FourVector& p2)
{
  const FourVector k = pulse.wave_vector();
  const DiracMatrix ks = slash(k);
  const DiracMatrix e1 = slash(first_conj);
  const DiracMatrix e2 = slash(second_conj);
  const Complex x1 = minkowski_dot(first_conj, k) / minkowski_dot(p0, k);
  const Complex x2 = minkowski_dot(second_conj, k) / minkowski_dot(p2, k);
  const double ea = pulse.charge_amplitude();
  switch (term) {
    case DTerm::d0: return e2 * ks * e1;
    case DTerm::d1_plus: {
      const DiracMatrix eps = slash(pulse.polarization());
      return ea * (x2 * eps * ks * e1 + x1 * e2 * ks * eps);
    }
    case DTerm::d1_minus: {
      const DiracMatrix eps_c = slash(ComplexFourVector(pulse.polarization().conjugate()));
      return ea * (x2 * eps_c * ks * e1 + x1 * e2 * ks * eps_c);
    }
    case DTerm::d2: return -ea * ea * x1 * x2 * ks;
  }
  throw std::logic_error("unknown D term");
}

DiracMatrix d_matrix(DTerm term, const ScatteringGeometry& geometry, Permutation order, int alpha, int beta)
{
  const std::array<int, 2> pol{alpha, beta};
  const int first = geometry.emitted_at(order, 1);
  const int second = geometry.emitted_at(order, 2);
  return d_matrix(term, geometry.pulse(), basis_polarization(geometry, first, pol[first]),
                  basis_polarization(geometry, second, pol[second]), geometry.initial_momentum(),
                  geometry.final_momentum());
}

Complex vertex_amplitude(const PhaseIntegrals& integrals, int n, const LaserPulse& pulse,
                         const VertexFactors& factors, const AdjointSpinor& out, const DiracSpinor& in)
{
  const double ea = pulse.charge_amplitude();
  DiracMatrix sum = DiracMatrix::Zero();
  for (const auto& [j, l] : weight_indices) {
    sum += std::pow(ea, j) * integrals.single(n, j, l) * factors.piece(j, l);
  }
  return -imag_unit * electron_charge * sandwich(out, sum, in);
}

DoubleCompton::DoubleCompton(const ScatteringGeometry& geometry, const QuadratureSettings& settings,
                             PulseSampleCache* cache)
    : geometry_(geometry)
{
  if (geometry_.photon_count() != 2) throw std::invalid_argument("DoubleCompton requires two photons");
  const LaserPulse& pulse = geometry_.pulse();

  std::vector<PhaseCoefficients> all;
  for (auto order : both_permutations) {
    const auto c1 = geometry_.vertex_coefficients(order, 1);
    const auto c2 = geometry_.vertex_coefficients(order, 2);
    all.insert(all.end(), {c1, c2, c1 + c2});
  }
  const auto samples = samples_for(pulse, all, settings, cache);

  for (auto order : both_permutations) {
    Ordering& o = orderings_[order == Permutation::pi1 ? 0 : 1];
    o.p1 = geometry_.intermediate_momentum(order);
    o.integrals = std::make_unique<PhaseIntegrals>(pulse, samples, geometry_.vertex_coefficients(order, 1),
                                                   geometry_.vertex_coefficients(order, 2));
    const auto& terms = u_terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& u = terms[t];
      o.upsilon_off[t] = o.integrals->upsilon({u.j2, u.j1, u.l2, u.l1, Channel::off});
      o.upsilon_on[t] = o.integrals->upsilon({u.j2, u.j1, u.l2, u.l1, Channel::on});
    }
    o.i_tilde = {o.integrals->i_tilde_0(), o.integrals->i_tilde(1, -1), o.integrals->i_tilde(1, 1),
                 o.integrals->i_tilde(2, 0)};
  }

  for (auto s : both_spins) {
    initial_spinors_[spin_index(s)] = dirac_spinor(geometry_.initial_momentum(), s);
    final_adjoints_[spin_index(s)] = adjoint(dirac_spinor(geometry_.final_momentum(), s));
  }
}

DiracMatrix DoubleCompton::channel_matrix(Channel channel, const ComplexFourVector& photon1_conj,
                                          const ComplexFourVector& photon2_conj) const
{
  const LaserPulse& pulse = geometry_.pulse();
  const FourVector& p0 = geometry_.initial_momentum();
  const FourVector& p2 = geometry_.final_momentum();
  const FourVector k = pulse.wave_vector();
  const double e2 = electron_charge * electron_charge;

  DiracMatrix i_m = DiracMatrix::Zero();
  for (auto order : both_permutations) {
    const Ordering& o = ordering(order);
    const bool natural = order == Permutation::pi1;
    const ComplexFourVector& first = natural ? photon1_conj : photon2_conj;
    const ComplexFourVector& second = natural ? photon2_conj : photon1_conj;
    const auto vf1 = vertex_factors(pulse, first, p0, o.p1);
    const auto vf2 = vertex_factors(pulse, second, o.p1, p2);

    DiracMatrix sum = DiracMatrix::Zero();
    const auto& terms = u_terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      Complex ups;
      switch (channel) {
        case Channel::off: ups = o.upsilon_off[t]; break;
        case Channel::on: ups = o.upsilon_on[t]; break;
        case Channel::total: ups = o.upsilon_off[t] + o.upsilon_on[t]; break;
      }
      sum += ups * u_matrix(terms[t], pulse, vf2, vf1, o.p1);
    }
    if (channel != Channel::on) {
      for (std::size_t d = 0; d < all_d_terms.size(); ++d) {
        sum += imag_unit * o.i_tilde[d] * d_matrix(all_d_terms[d], pulse, first, second, p0, p2);
      }
    }
    i_m += (-e2 / (2.0 * minkowski_dot(o.p1, k))) * sum;
  }
  return -imag_unit * i_m;
}

Complex DoubleCompton::amplitude(Channel channel, const ComplexFourVector& photon1_conj,
                                 const ComplexFourVector& photon2_conj, Spin s0, Spin s2) const
{
  return sandwich(final_adjoints_[spin_index(s2)], channel_matrix(channel, photon1_conj, photon2_conj),
                  initial_spinors_[spin_index(s0)]);
}

AmplitudeTable DoubleCompton::table(Channel channel) const
{
  AmplitudeTable out;
  for (int alpha = 0; alpha < 2; ++alpha) {
    for (int beta = 0; beta < 2; ++beta) {
      const DiracMatrix m = channel_matrix(channel, basis_polarization(geometry_, 0, alpha),
                                           basis_polarization(geometry_, 1, beta));
      for (auto s0 : both_spins) {
        for (auto s2 : both_spins) {
          out(alpha, beta, spin_index(s0), spin_index(s2)) =
              sandwich(final_adjoints_[spin_index(s2)], m, initial_spinors_[spin_index(s0)]);
        }
      }
    }
  }
  return out;
}

Complex DoubleCompton::vertex_amplitude(Permutation order, int n, const ComplexFourVector& photon_conj, Spin s_in,
                                        Spin s_out) const
{
  const Ordering& o = ordering(order);
  const LaserPulse& pulse = geometry_.pulse();
  if (n == 1) {
    const auto f = vertex_factors(pulse, photon_conj, geometry_.initial_momentum(), o.p1);
    return dcs::vertex_amplitude(*o.integrals, 1, pulse, f, adjoint(dirac_spinor(o.p1, s_out)),
                                 initial_spinors_[spin_index(s_in)]);
  }
  if (n == 2) {
    const auto f = vertex_factors(pulse, photon_conj, o.p1, geometry_.final_momentum());
    return dcs::vertex_amplitude(*o.integrals, 2, pulse, f, final_adjoints_[spin_index(s_out)],
                                 dirac_spinor(o.p1, s_in));
  }
  throw std::invalid_argument("vertex index must be 1 or 2");
}

Complex DoubleCompton::on_shell_factorized(const ComplexFourVector& photon1_conj,
                                           const ComplexFourVector& photon2_conj, Spin s0, Spin s2) const
{
  const FourVector k = geometry_.pulse().wave_vector();
  Complex i_m{0.0, 0.0};
  for (auto order : both_permutations) {
    const bool natural = order == Permutation::pi1;
    const ComplexFourVector& first = natural ? photon1_conj : photon2_conj;
    const ComplexFourVector& second = natural ? photon2_conj : photon1_conj;
    const double pk = std::abs(minkowski_dot(ordering(order).p1, k));
    for (auto s1 : both_spins) {
      i_m += vertex_amplitude(order, 2, second, s1, s2) * vertex_amplitude(order, 1, first, s0, s1) / (4.0 * pk);
    }
  }
  return -imag_unit * i_m;
}

double DoubleCompton::on_shell_concurrence_estimate() const
{
  const FourVector k = geometry_.pulse().wave_vector();
  const double pk1 = std::abs(minkowski_dot(ordering(Permutation::pi1).p1, k));
  const double pk2 = std::abs(minkowski_dot(ordering(Permutation::pi2).p1, k));
  Eigen::Matrix2cd psi = Eigen::Matrix2cd::Zero();
  std::array<Complex, 2> a, b, c, d;
  for (int i = 0; i < 2; ++i) {
    const auto e1 = basis_polarization(geometry_, 0, i);
    const auto e2 = basis_polarization(geometry_, 1, i);
    a[i] = vertex_amplitude(Permutation::pi1, 1, e1, Spin::up, Spin::up);
    b[i] = vertex_amplitude(Permutation::pi1, 2, e2, Spin::up, Spin::up);
    c[i] = vertex_amplitude(Permutation::pi2, 2, e1, Spin::up, Spin::up);
    d[i] = vertex_amplitude(Permutation::pi2, 1, e2, Spin::up, Spin::up);
  }
  for (int alpha = 0; alpha < 2; ++alpha) {
    for (int beta = 0; beta < 2; ++beta) {
      psi(alpha, beta) = b[beta] * a[alpha] / (4.0 * pk1) + c[alpha] * d[beta] / (4.0 * pk2);
    }
  }
  const double norm = psi.squaredNorm();
  if (norm <= 0.0) return 0.0;
  return 2.0 * std::abs(psi(0, 0) * psi(1, 1) - psi(0, 1) * psi(1, 0)) / norm;
}

SingleCompton::SingleCompton(const ScatteringGeometry& geometry, const QuadratureSettings& settings,
                             PulseSampleCache* cache)
    : geometry_(geometry)
{
  if (geometry_.photon_count() != 1) throw std::invalid_argument("SingleCompton requires one photon");
  const auto c = geometry_.vertex_coefficients(Permutation::pi1, 1);
  integrals_ = std::make_unique<PhaseIntegrals>(geometry_.pulse(), samples_for(geometry_.pulse(), {c}, settings, cache), c);
}

Complex SingleCompton::amplitude(const ComplexFourVector& photon_conj, Spin s0, Spin s1) const
{
  const auto f = vertex_factors(geometry_.pulse(), photon_conj, geometry_.initial_momentum(),
                                geometry_.final_momentum());
  return vertex_amplitude(*integrals_, 1, geometry_.pulse(), f,
                          adjoint(dirac_spinor(geometry_.final_momentum(), s1)),
                          dirac_spinor(geometry_.initial_momentum(), s0));
}

Complex SingleCompton::amplitude(int alpha, Spin s0, Spin s1) const
{
  return amplitude(basis_polarization(geometry_, 0, alpha), s0, s1);
}

}  // namespace dcs
