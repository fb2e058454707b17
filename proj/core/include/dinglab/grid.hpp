#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dinglab/chart.hpp"

namespace dinglab {

struct GridNode {
  ChartPoint p;
  double x = 0.0;      // height coordinate in [-1, 1]
  double theta = 0.0;  // azimuth in [0, 2pi)
  double weight = 0.0; // mass of the round probability measure
};

/// Gauss-Legendre (in x) x trapezoid (in theta) product grid for the round
/// probability measure on the sphere. Weights sum to 1.
struct QuadratureGrid {
  int n_x = 0;
  int n_theta = 0;
  std::vector<GridNode> nodes;
};

/// Requires n_x >= 2, n_theta >= 4.
QuadratureGrid make_grid(int n_x, int n_theta);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Deterministic fixed-tree pairwise summation; the reduction order does not
/// depend on how the terms were produced.
double pairwise_sum(std::span<const double> v);

/// sum_i weight_i * values_i over the grid, pairwise.
double integrate(const QuadratureGrid& grid, std::span<const double> values);

/// sum_i weight_i * a_i * b_i.
double integrate_product(const QuadratureGrid& grid, std::span<const double> a,
                         std::span<const double> b);

}  // namespace dinglab
