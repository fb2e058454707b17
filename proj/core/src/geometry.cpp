#include "dinglab/geometry.hpp"

#include <cmath>
#include <numbers>

#include "dinglab/errors.hpp"

namespace dinglab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double checked_density(const Jet2& phi_jet) {
  const double d = phi_jet.at(1, 1).real();
  if (d <= kDegenerateThreshold)
    throw DegenerateMetricError("degenerate metric: d_w d_wbar phi = " + std::to_string(d));
  return d;
}

double round_factor(const ChartPoint& p) {
  const double d = 1.0 + std::norm(p.w);
  return d * d;
}
}  // namespace

double metric_density(const Potential& phi, const ChartPoint& p) {
  return checked_density(phi.local_jet(p));
}

std::vector<double> ma_density(const Potential& phi, const QuadratureGrid& grid) {
  std::vector<double> dens(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    dens[i] = checked_density(phi.local_jet(node.p)) * round_factor(node.p);
  }
  return dens;
}

CanonicalMeasure canonical_measure(const Potential& phi, const QuadratureGrid& grid) {
  CanonicalMeasure m;
  m.density.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    const double phi_loc = phi.local_value(node.p);
    m.density[i] = kTwoPi * round_factor(node.p) * std::exp(-phi_loc);
  }
  m.mass = integrate(grid, m.density);
  for (double& d : m.density) d /= m.mass;
  return m;
}

std::vector<double> laplacian(const ScalarField& f, const Potential& phi,
                              const QuadratureGrid& grid) {
  std::vector<double> out(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& p = grid.nodes[i].p;
    const double d = checked_density(phi.local_jet(p));
    out[i] = f.jet11(p).d_wwbar.real() / d;
  }
  return out;
}

std::vector<Complex> grad_pair(const ScalarField& f, const ScalarField& g,
                               const Potential& phi, const QuadratureGrid& grid) {
  std::vector<Complex> out(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& p = grid.nodes[i].p;
    const double d = checked_density(phi.local_jet(p));
    out[i] = f.jet11(p).d_w * std::conj(g.jet11(p).d_w) / d;
  }
  return out;
}

std::vector<double> ricci_potential(const Potential& phi, const QuadratureGrid& grid) {
  const CanonicalMeasure mu = canonical_measure(phi, grid);
  std::vector<double> out(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& p = grid.nodes[i].p;
    const Jet2 j = phi.local_jet(p);
    const double d = checked_density(j);
    out[i] = -j.value().real() - std::log(d) + std::log(kTwoPi) - std::log(mu.mass);
  }
  return out;
}

std::vector<double> scalar_curvature(const Potential& phi, const QuadratureGrid& grid) {
  std::vector<double> out(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& p = grid.nodes[i].p;
    const Jet2 j = phi.local_jet(p);
    const double d = checked_density(j);
    const Jet1 log_density = log(mixed_derivative(j));
    out[i] = -log_density.at(1, 1).real() / d;
  }
  return out;
}

Jet11 RicciField::jet11(const ChartPoint& p) const {
  const Jet2 j = phi_->local_jet(p);
  checked_density(j);
  const Jet1 h = -truncate11(j) - log(mixed_derivative(j)) +
                 Complex{std::log(kTwoPi) - log_mass_, 0.0};
  return to_jet11(h);
}

}  // namespace dinglab
