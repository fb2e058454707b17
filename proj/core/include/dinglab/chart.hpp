#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "dinglab/jet.hpp"

namespace dinglab {

/// Two-chart atlas of the projective line. North covers |w| <= 1 around
/// x3 = +1, South covers the rest; the transition is w' = 1/w.
enum class Chart { North, South };

struct ChartPoint {
  Chart chart = Chart::North;
  Complex w{0.0, 0.0};
};

/// Transition to the other chart. Only meaningful away from the chart
/// centers; grid nodes keep |w| <= 1 but overlap tests may swap freely.
inline ChartPoint swapped(const ChartPoint& p) {
  return ChartPoint{p.chart == Chart::North ? Chart::South : Chart::North,
                    1.0 / p.w};
}

/// Ambient coordinates on the unit sphere.
inline std::array<double, 3> ambient(const ChartPoint& p) {
  const double r2 = std::norm(p.w);
  const double d = 1.0 + r2;
  const double a = 2.0 * p.w.real() / d;
  const double b = 2.0 * p.w.imag() / d;
  const double h = (1.0 - r2) / d;
  if (p.chart == Chart::North) return {a, b, h};
  return {a, -b, -h};
}

/// Chart representative with |w| <= 1 (North for x3 >= 0).
inline ChartPoint chart_point(double x1, double x2, double x3) {
  if (x3 >= 0.0) return {Chart::North, Complex{x1, x2} / (1.0 + x3)};
  return {Chart::South, Complex{x1, -x2} / (1.0 - x3)};
}

/// (Order,Order)-jets of the ambient coordinate functions at p.
template <int Order>
std::array<Jet<Order>, 3> ambient_jets(const ChartPoint& p) {
  using J = Jet<Order>;
  const J w = J::variable(p.w);
  const J wb = J::covariable(p.w);
  const J inv_d = inverse(w * wb + 1.0);
  const J a = (w + wb) * inv_d;
  const J b = Complex{0.0, -1.0} * ((w - wb) * inv_d);
  const J h = 2.0 * inv_d - 1.0;
  if (p.chart == Chart::North) return {a, b, h};
  return {a, -b, -h};
}

/// Local potential of the round reference metric, 2 log(1+|w|^2),
/// identical formula in both charts.
template <int Order>
Jet<Order> round_reference_jet(const ChartPoint& p) {
  using J = Jet<Order>;
  const J w = J::variable(p.w);
  const J wb = J::covariable(p.w);
  return 2.0 * log(w * wb + 1.0);
}

inline double round_reference_value(const ChartPoint& p) {
  return 2.0 * std::log1p(std::norm(p.w));
}

}  // namespace dinglab
