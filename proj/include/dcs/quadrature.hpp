#pragma once

// Phase integrals of single- and double-photon emission.
//
// For one photon ordering, vertex n (n = 1 first, n = 2 second) carries the
// phase g_n(phi) built from PhaseCoefficients; g~ = g_1 + g_2 is the phase of
// the contact (equal-phase) terms. Field weights are
//   A_0 = 1, A_1 = cA / A0 (with harmonic shift e^{i l phi}, l = +/-1 picks
//   cA or cA*), A_2 = A_B^2 / A0^2.
//
// Field-weighted integrals have compact support and are integrated on a
// composite Chebyshev-Lobatto grid. Unweighted (zeroth-order) integrals do
// not converge at the pulse boundaries; they are obtained from the
// gauge-invariance relations that express them through weighted ones.

#include "dcs/pulse.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <memory>
#include <mutex>

namespace dcs {

struct QuadratureSettings
{
  int points_per_period = 24;
  int min_points = 2048;
  double rel_tolerance = 1e-6;
};

/// Smallest |kappa| for which the zeroth-order relations are used.
inline constexpr double kappa_min = 1e-6;

/// Composite Chebyshev-Lobatto rule on [begin, end]: `panels` panels of
/// degree 16 sharing their end points.
class PhaseGrid
{
 public:
  static constexpr int panel_degree = 16;

  PhaseGrid(double begin, double end, int panels);

  int size() const { return static_cast<int>(nodes_.size()); }
  int panels() const { return panels_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  Complex integrate(const Eigen::VectorXcd& values) const { return weights_.dot(values); }

  /// H(x_i) = integral of f over [begin, x_i] at every node.
  Eigen::VectorXcd cumulative(const Eigen::VectorXcd& values) const;

 private:
  int panels_;
  double half_width_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Number of panels needed to resolve frequencies up to max_frequency over the pulse.
int panels_for(const LaserPulse& pulse, double max_frequency, const QuadratureSettings& settings);

/// Upper bound on |dg/dphi| for the given coefficients.
double phase_frequency_bound(const LaserPulse& pulse, const PhaseCoefficients& c);

/// Largest frequency of the field weights A_j e^{i l phi}.
double weight_frequency_bound(const LaserPulse& pulse);

/// Pulse quantities tabulated on a grid; independent of the emission kinematics.
struct PulseSamples
{
  std::shared_ptr<const PhaseGrid> grid;
  Eigen::VectorXcd amplitude_minus;  // cA / A0
  Eigen::VectorXcd amplitude_plus;   // cA* / A0
  Eigen::VectorXd field_squared;     // A_B^2 / A0^2
  Eigen::VectorXcd cumulative_amplitude;
  Eigen::VectorXd cumulative_field_squared;
};

std::shared_ptr<const PulseSamples> sample_pulse(const LaserPulse& pulse, int panels);

/// Insert-once cache of PulseSamples for one pulse, keyed by panel count.
/// Safe for concurrent use; a value is never replaced once inserted.
class PulseSampleCache
{
 public:
  explicit PulseSampleCache(LaserPulse pulse) : pulse_(std::move(pulse)) {}

  const LaserPulse& pulse() const { return pulse_; }
  std::shared_ptr<const PulseSamples> get(int panels);

 private:
  LaserPulse pulse_;
  std::mutex mutex_;
  std::map<int, std::shared_ptr<const PulseSamples>> entries_;
};

enum class Channel { off, on, total };

const char* channel_name(Channel c);

/// Selects Upsilon_{j2 j1}(l2, l1). Valid (j, l): (0, 0), (1, -1), (1, +1), (2, 0).
struct UpsilonKey
{
  int j2 = 0;
  int j1 = 0;
  int l2 = 0;
  int l1 = 0;
  Channel channel = Channel::total;
};

/// All phase integrals of one photon ordering. Immutable after construction.
class PhaseIntegrals
{
 public:
  /// Two-vertex integrals on a grid chosen from the settings.
  PhaseIntegrals(const LaserPulse& pulse, const PhaseCoefficients& first, const PhaseCoefficients& second,
                 const QuadratureSettings& settings = {});
  /// Two-vertex integrals on pre-sampled pulse data.
  PhaseIntegrals(const LaserPulse& pulse, std::shared_ptr<const PulseSamples> samples,
                 const PhaseCoefficients& first, const PhaseCoefficients& second);
  /// Single-vertex integrals; only `single(1, ...)` and `regularized_single_I0(1)` are available.
  PhaseIntegrals(const LaserPulse& pulse, std::shared_ptr<const PulseSamples> samples,
                 const PhaseCoefficients& vertex);

  bool has_second_vertex() const { return two_vertices_; }

  const PhaseCoefficients& vertex(int n) const { return n == 1 ? first_ : second_; }
  PhaseCoefficients combined() const { return first_ + second_; }
  const PhaseGrid& grid() const { return *samples_->grid; }

  /// int e^{i g_n} A_j e^{i l phi}, n in {1, 2}; j = 0 gives the regularized I0.
  Complex single(int n, int j, int l) const;

  /// Regularized zeroth-order single-vertex integral.
  Complex regularized_single_I0(int n) const;

  /// I~_j(l) = int e^{i g~} A_j e^{i l phi}; I~_{1+} is l = -1, (I~_{1-})* is l = +1.
  Complex i_tilde(int j, int l) const;

  /// Regularized I~_0.
  Complex i_tilde_0() const;

  /// Upsilon for any key; zeroth-order entries go through the relations.
  Complex upsilon(const UpsilonKey& key) const;

  /// Direct quadrature; throws std::logic_error for zeroth-order keys.
  Complex upsilon_direct(const UpsilonKey& key) const;

  /// Zeroth-order Upsilon via the relations (Total), factorized regularized
  /// products (On) and their difference (Off).
  Complex upsilon_zeroth_via_relations(const UpsilonKey& key) const;

 private:
  struct VertexArrays
  {
    // Indexed by weight slot: 0 -> (1,-1), 1 -> (1,+1), 2 -> (2,0).
    std::array<Eigen::VectorXcd, 3> weighted;
    std::array<Complex, 3> integral;
  };

  void build();
  static int slot(int j, int l);
  void require_two_vertices() const;
  Complex relation_total(int j2, int l2, int j1, int l1) const;
  Complex direct(int j2, int l2, int j1, int l1, Channel channel) const;

  double charge_amplitude_;
  bool two_vertices_;
  std::shared_ptr<const PulseSamples> samples_;

  PhaseCoefficients first_;
  PhaseCoefficients second_;
  std::array<VertexArrays, 2> vertex_;
  std::array<Eigen::VectorXcd, 3> first_cumulative_;
  VertexArrays tilde_;
};

}  // namespace dcs
