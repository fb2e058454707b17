#include "dinglab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dinglab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

QuadratureGrid make_grid(int n_x, int n_theta) {
  if (n_x < 2) throw std::invalid_argument("make_grid: n_x must be >= 2");
  if (n_theta < 4) throw std::invalid_argument("make_grid: n_theta must be >= 4");
  std::vector<double> xs, ws;
  gauss_legendre(n_x, xs, ws);

  QuadratureGrid grid;
  grid.n_x = n_x;
  grid.n_theta = n_theta;
  grid.nodes.reserve(static_cast<std::size_t>(n_x) * n_theta);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n_x; ++i) {
    const double x = xs[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int j = 0; j < n_theta; ++j) {
      const double theta = two_pi * j / n_theta;
      GridNode node;
      node.x = x;
      node.theta = theta;
      node.weight = ws[i] * 0.5 / n_theta;
      node.p = chart_point(s * std::cos(theta), s * std::sin(theta), x);
      grid.nodes.push_back(node);
    }
  }
  return grid;
}

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const QuadratureGrid& grid, std::span<const double> values) {
  std::vector<double> terms(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    terms[i] = grid.nodes[i].weight * values[i];
  return pairwise_sum(terms);
}

double integrate_product(const QuadratureGrid& grid, std::span<const double> a,
                         std::span<const double> b) {
  std::vector<double> terms(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    terms[i] = grid.nodes[i].weight * a[i] * b[i];
  return pairwise_sum(terms);
}

}  // namespace dinglab
