#include "dinglab/balanced.hpp"

#include <cmath>

#include "dinglab/geometry.hpp"

namespace dinglab {

namespace {

/// One step of the balancing map, returning the unit-determinant Gram
/// matrix of the re-Hilbert form and the residual of the current form.
HermitianForm balance_step(const HermitianForm& h, int k, const QuadratureGrid& grid,
                           double& residual) {
  const int n = h.dim();
  const FsPotential phi = fs(h, k);
  const CanonicalMeasure mu = canonical_measure(phi, grid);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    const Eigen::VectorXcd zeta =
        weighted_covector(k, node.p, phi.local_value(node.p));
    gram.noalias() += (node.weight * mu.density[i] * n) * (zeta * zeta.adjoint());
  }
  gram = 0.5 * (gram + gram.adjoint());

  // The center of mass of h is readable off the unnormalized update:
  // C^dagger gram C = k N Mbar.
  const Eigen::MatrixXcd& c = h.onb();
  const Eigen::MatrixXcd mbar =
      (c.adjoint() * gram * c) / (static_cast<double>(k) * n);
  residual = (mbar - Eigen::MatrixXcd::Identity(n, n) / n).norm();

  HermitianForm next(std::move(gram));
  const double scale = std::exp(-next.log_det() / n);
  return HermitianForm(scale * next.gram());
}

}  // namespace

BalanceTrace balance(const HermitianForm& h_init, int k, const QuadratureGrid& grid,
                     int max_iter, double tol) {
  BalanceTrace trace;
  const double scale = std::exp(-h_init.log_det() / h_init.dim());
  HermitianForm h(scale * h_init.gram());
  const HermitianForm h0(h.gram());
  for (int step = 0; step <= max_iter; ++step) {
    double residual = 0.0;
    HermitianForm next = balance_step(h, k, grid, residual);
    trace.steps.push_back({step, residual, q_ding(h, h0, k, grid)});
    if (residual < tol) {
      trace.converged = true;
      trace.final = std::move(h);
      return trace;
    }
    h = std::move(next);
  }
  trace.final = std::move(h);
  return trace;
}

std::vector<BalancedVsKeRow> balanced_vs_ke(const Potential& phi_start,
                                            const std::vector<int>& ks,
                                            const QuadratureGrid& grid, int max_iter,
                                            double tol) {
  const PolynomialPotential round = round_potential();
  std::vector<BalancedVsKeRow> rows;
  for (int k : ks) {
    const BalanceTrace trace =
        balance(hilb(phi_start, k, grid), k, grid, max_iter, tol);
    const FsPotential phi = fs(*trace.final, k);
    std::vector<double> diff(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      const auto& p = grid.nodes[i].p;
      diff[i] = phi.local_value(p) - round.local_value(p);
    }
    const double mean = integrate(grid, diff);
    double sup = 0.0;
    for (double d : diff) sup = std::max(sup, std::abs(d - mean));
    rows.push_back({k, static_cast<int>(trace.steps.size()) - 1, sup});
  }
  return rows;
}

}  // namespace dinglab
