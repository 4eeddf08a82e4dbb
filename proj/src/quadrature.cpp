#include "dcs/quadrature.hpp"

#include "dcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcs {

namespace {

constexpr int n_nodes = PhaseGrid::panel_degree + 1;

using PanelMatrix = Eigen::Matrix<double, n_nodes, n_nodes>;

// Spectral integration matrix on [-1, 1] for Chebyshev-Lobatto nodes
// x_j = -cos(pi j / n): (S f)_j = integral of the interpolant over [-1, x_j].
PanelMatrix build_integration_matrix()
{
  constexpr int n = PhaseGrid::panel_degree;
  PanelMatrix vandermonde;
  PanelMatrix antiderivative;
  for (int j = 0; j <= n; ++j) {
    const double theta = std::numbers::pi - std::numbers::pi * j / n;
    const double x = std::cos(theta);
    for (int k = 0; k <= n; ++k) {
      vandermonde(j, k) = std::cos(k * theta);
      double value;
      if (k == 0) {
        value = x + 1.0;
      } else if (k == 1) {
        value = 0.5 * (x * x - 1.0);
      } else {
        const double tk_plus = std::cos((k + 1) * theta) / (k + 1);
        const double tk_minus = std::cos((k - 1) * theta) / (k - 1);
        const double at_minus_one = ((k + 1) % 2 == 0 ? 1.0 : -1.0) / (k + 1) - ((k - 1) % 2 == 0 ? 1.0 : -1.0) / (k - 1);
        value = 0.5 * (tk_plus - tk_minus - at_minus_one);
      }
      antiderivative(j, k) = value;
    }
  }
  // S = W V^{-1}  <=>  V^T S^T = W^T
  const PanelMatrix st = vandermonde.transpose().partialPivLu().solve(antiderivative.transpose());
  return st.transpose();
}

const PanelMatrix& integration_matrix()
{
  static const PanelMatrix s = build_integration_matrix();
  return s;
}

void require_regular(double kappa)
{
  if (!(std::abs(kappa) > kappa_min)) {
    throw KinematicError("soft/collinear kinematics: zeroth-order regularization invalid");
  }
}

}  // namespace

PhaseGrid::PhaseGrid(double begin, double end, int panels) : panels_(panels)
{
  if (panels < 1 || !(end > begin)) throw std::invalid_argument("PhaseGrid requires end > begin and panels >= 1");
  constexpr int n = panel_degree;
  const double width = (end - begin) / panels;
  half_width_ = 0.5 * width;
  const auto& s = integration_matrix();

  nodes_.resize(panels * n + 1);
  weights_.setZero(panels * n + 1);
  for (int p = 0; p < panels; ++p) {
    const double centre = begin + (p + 0.5) * width;
    for (int j = 0; j <= n; ++j) {
      nodes_(p * n + j) = centre - half_width_ * std::cos(std::numbers::pi * j / n);
      weights_(p * n + j) += half_width_ * s(n, j);
    }
  }
  nodes_(0) = begin;
  nodes_(panels * n) = end;
}

Eigen::VectorXcd PhaseGrid::cumulative(const Eigen::VectorXcd& values) const
{
  constexpr int n = panel_degree;
  if (values.size() != nodes_.size()) throw std::invalid_argument("PhaseGrid::cumulative: size mismatch");
  const auto& s = integration_matrix();
  Eigen::VectorXcd out(values.size());
  out(0) = 0.0;
  Complex offset{0.0, 0.0};
  for (int p = 0; p < panels_; ++p) {
    const Eigen::Matrix<Complex, n_nodes, 1> local =
        half_width_ * (s.cast<Complex>() * values.segment<n_nodes>(p * n));
    for (int j = 1; j <= n; ++j) out(p * n + j) = offset + local(j);
    offset += local(n);
  }
  return out;
}

int panels_for(const LaserPulse& pulse, double max_frequency, const QuadratureSettings& settings)
{
  const double periods = max_frequency * pulse.delta_phi() / (2.0 * std::numbers::pi);
  const double points = std::max(static_cast<double>(settings.min_points), settings.points_per_period * periods);
  return std::max(1, static_cast<int>(std::ceil(points / PhaseGrid::panel_degree)));
}

double phase_frequency_bound(const LaserPulse& pulse, const PhaseCoefficients& c)
{
  const double ea0 = std::abs(pulse.charge_amplitude());
  // |2e Re{zeta cA}| <= 2|e A0||zeta|;  |e^2 upsilon A_B^2 / 2| <= 2 e^2 A0^2 |upsilon|
  return std::abs(c.kappa) + 2.0 * ea0 * std::abs(c.zeta) + 2.0 * ea0 * ea0 * std::abs(c.upsilon);
}

double weight_frequency_bound(const LaserPulse& pulse)
{
  return 2.0 + 4.0 * std::numbers::pi / pulse.delta_phi();
}

std::shared_ptr<const PulseSamples> sample_pulse(const LaserPulse& pulse, int panels)
{
  auto samples = std::make_shared<PulseSamples>();
  samples->grid = std::make_shared<const PhaseGrid>(pulse.phase_begin(), pulse.phase_end(), panels);
  const auto& nodes = samples->grid->nodes();
  const int size = static_cast<int>(nodes.size());
  const double a0 = pulse.amplitude();
  samples->amplitude_minus.resize(size);
  samples->amplitude_plus.resize(size);
  samples->field_squared.resize(size);
  samples->cumulative_amplitude.resize(size);
  samples->cumulative_field_squared.resize(size);
  for (int i = 0; i < size; ++i) {
    const double phi = nodes(i);
    const double c = std::cos(std::numbers::pi * phi / pulse.delta_phi());
    const double envelope = c * c;
    samples->amplitude_minus(i) = envelope * std::polar(1.0, -phi);
    samples->amplitude_plus(i) = envelope * std::polar(1.0, phi);
    samples->field_squared(i) = pulse.normalized_field_squared()(phi).real();
    samples->cumulative_amplitude(i) = a0 * pulse.normalized_amplitude().integral(pulse.phase_begin(), phi);
    samples->cumulative_field_squared(i) =
        a0 * a0 * pulse.normalized_field_squared().integral(pulse.phase_begin(), phi).real();
  }
  return samples;
}

std::shared_ptr<const PulseSamples> PulseSampleCache::get(int panels)
{
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(panels); it != entries_.end()) return it->second;
  }
  // Sample outside the lock; if another thread raced us, keep its value.
  auto fresh = sample_pulse(pulse_, panels);
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(panels, std::move(fresh)).first->second;
}

const char* channel_name(Channel c)
{
  switch (c) {
    case Channel::off: return "off";
    case Channel::on: return "on";
    case Channel::total: return "total";
  }
  return "?";
}

PhaseIntegrals::PhaseIntegrals(const LaserPulse& pulse, const PhaseCoefficients& first,
                               const PhaseCoefficients& second, const QuadratureSettings& settings)
    : charge_amplitude_(pulse.charge_amplitude()), two_vertices_(true), first_(first), second_(second)
{
  const double f = std::max({phase_frequency_bound(pulse, first), phase_frequency_bound(pulse, second),
                             phase_frequency_bound(pulse, first + second)}) +
                   weight_frequency_bound(pulse);
  samples_ = sample_pulse(pulse, panels_for(pulse, f, settings));
  build();
}

PhaseIntegrals::PhaseIntegrals(const LaserPulse& pulse, std::shared_ptr<const PulseSamples> samples,
                               const PhaseCoefficients& first, const PhaseCoefficients& second)
    : charge_amplitude_(pulse.charge_amplitude()),
      two_vertices_(true),
      samples_(std::move(samples)),
      first_(first),
      second_(second)
{
  build();
}

PhaseIntegrals::PhaseIntegrals(const LaserPulse& pulse, std::shared_ptr<const PulseSamples> samples,
                               const PhaseCoefficients& vertex)
    : charge_amplitude_(pulse.charge_amplitude()), two_vertices_(false), samples_(std::move(samples)), first_(vertex)
{
  build();
}

int PhaseIntegrals::slot(int j, int l)
{
  if (j == 1 && l == -1) return 0;
  if (j == 1 && l == 1) return 1;
  if (j == 2 && l == 0) return 2;
  throw std::invalid_argument("invalid field-weight index (j, l)");
}

void PhaseIntegrals::build()
{
  const auto& s = *samples_;
  const auto& grid = *s.grid;
  const auto& nodes = grid.nodes();
  const double e = electron_charge;

  auto fill = [&](const PhaseCoefficients& c, VertexArrays& out) {
    Eigen::VectorXcd phase(nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
      const double g = c.kappa * nodes(i) + 2.0 * e * (c.zeta * s.cumulative_amplitude(i)).real() -
                       0.5 * e * e * c.upsilon * s.cumulative_field_squared(i);
      phase(i) = std::polar(1.0, g);
    }
    out.weighted[0] = phase.cwiseProduct(s.amplitude_minus);
    out.weighted[1] = phase.cwiseProduct(s.amplitude_plus);
    out.weighted[2] = phase.cwiseProduct(s.field_squared.cast<Complex>());
    for (int k = 0; k < 3; ++k) out.integral[k] = grid.integrate(out.weighted[k]);
  };

  fill(first_, vertex_[0]);
  if (two_vertices_) {
    fill(second_, vertex_[1]);
    fill(first_ + second_, tilde_);
    for (int k = 0; k < 3; ++k) first_cumulative_[k] = grid.cumulative(vertex_[0].weighted[k]);
  }
}

void PhaseIntegrals::require_two_vertices() const
{
  if (!two_vertices_) throw std::logic_error("two-vertex integral requested from a single-vertex PhaseIntegrals");
}

Complex PhaseIntegrals::single(int n, int j, int l) const
{
  if (n != 1 && n != 2) throw std::invalid_argument("vertex index must be 1 or 2");
  if (n == 2) require_two_vertices();
  if (j == 0) {
    if (l != 0) throw std::invalid_argument("invalid field-weight index (j, l)");
    return regularized_single_I0(n);
  }
  return vertex_[n - 1].integral[slot(j, l)];
}

Complex PhaseIntegrals::regularized_single_I0(int n) const
{
  if (n == 2) require_two_vertices();
  const PhaseCoefficients& c = vertex(n);
  require_regular(c.kappa);
  const auto& v = vertex_[n - 1];
  const double ea = charge_amplitude_;
  return -(ea * c.zeta * v.integral[0] + ea * std::conj(c.zeta) * v.integral[1] -
           0.5 * ea * ea * c.upsilon * v.integral[2]) /
         c.kappa;
}

Complex PhaseIntegrals::i_tilde(int j, int l) const
{
  require_two_vertices();
  if (j == 0) {
    if (l != 0) throw std::invalid_argument("invalid field-weight index (j, l)");
    return i_tilde_0();
  }
  return tilde_.integral[slot(j, l)];
}

Complex PhaseIntegrals::i_tilde_0() const
{
  require_two_vertices();
  const PhaseCoefficients c = combined();
  require_regular(c.kappa);
  const double ea = charge_amplitude_;
  return -(ea * c.zeta * tilde_.integral[0] + ea * std::conj(c.zeta) * tilde_.integral[1] -
           0.5 * ea * ea * c.upsilon * tilde_.integral[2]) /
         c.kappa;
}

Complex PhaseIntegrals::direct(int j2, int l2, int j1, int l1, Channel channel) const
{
  const int s2 = slot(j2, l2);
  const int s1 = slot(j1, l1);
  const auto& outer = vertex_[1].weighted[s2];
  const auto& inner = first_cumulative_[s1];
  const auto& w = grid().weights();
  switch (channel) {
    case Channel::on: return 0.5 * vertex_[1].integral[s2] * vertex_[0].integral[s1];
    case Channel::total: return (w.cast<Complex>().array() * outer.array() * inner.array()).sum();
    case Channel::off: {
      const Complex half_total = 0.5 * inner(inner.size() - 1);
      return (w.cast<Complex>().array() * outer.array() * (inner.array() - half_total)).sum();
    }
  }
  throw std::logic_error("unknown channel");
}

Complex PhaseIntegrals::upsilon_direct(const UpsilonKey& key) const
{
  require_two_vertices();
  if (key.j1 == 0 || key.j2 == 0) {
    throw std::logic_error("zeroth-order Upsilon must be evaluated through the regularizing relations");
  }
  return direct(key.j2, key.l2, key.j1, key.l1, key.channel);
}

Complex PhaseIntegrals::relation_total(int j2, int l2, int j1, int l1) const
{
  const double ea = charge_amplitude_;
  if (j2 != 0 && j1 != 0) return direct(j2, l2, j1, l1, Channel::total);
  if (j2 == 0) {
    const PhaseCoefficients& c = second_;
    require_regular(c.kappa);
    const Complex source = j1 == 0 ? i_tilde_0() : i_tilde(j1, l1);
    return (imag_unit * source - ea * c.zeta * relation_total(1, -1, j1, l1) -
            ea * std::conj(c.zeta) * relation_total(1, 1, j1, l1) +
            0.5 * ea * ea * c.upsilon * relation_total(2, 0, j1, l1)) /
           c.kappa;
  }
  const PhaseCoefficients& c = first_;
  require_regular(c.kappa);
  return (-imag_unit * i_tilde(j2, l2) - ea * c.zeta * relation_total(j2, l2, 1, -1) -
          ea * std::conj(c.zeta) * relation_total(j2, l2, 1, 1) +
          0.5 * ea * ea * c.upsilon * relation_total(j2, l2, 2, 0)) /
         c.kappa;
}

Complex PhaseIntegrals::upsilon_zeroth_via_relations(const UpsilonKey& key) const
{
  require_two_vertices();
  if (key.j1 != 0 && key.j2 != 0) throw std::logic_error("relation path is reserved for zeroth-order keys");
  // Validate indices before any work.
  if (key.j2 == 0 && key.l2 != 0) throw std::invalid_argument("invalid field-weight index (j, l)");
  if (key.j1 == 0 && key.l1 != 0) throw std::invalid_argument("invalid field-weight index (j, l)");
  const Complex on = 0.5 * single(2, key.j2, key.l2) * single(1, key.j1, key.l1);
  if (key.channel == Channel::on) return on;
  const Complex total = relation_total(key.j2, key.l2, key.j1, key.l1);
  return key.channel == Channel::total ? total : total - on;
}

Complex PhaseIntegrals::upsilon(const UpsilonKey& key) const
{
  if (key.j1 == 0 || key.j2 == 0) return upsilon_zeroth_via_relations(key);
  return upsilon_direct(key);
}

}  // namespace dcs
