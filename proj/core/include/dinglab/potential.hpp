#pragma once

#include <memory>

#include "dinglab/chart.hpp"
#include "dinglab/expr.hpp"
#include "dinglab/jet.hpp"

namespace dinglab {

/// A fiber metric on the anticanonical bundle, presented through the
/// (2,2)-jet of its local potential in either chart. Local potentials of
/// two metrics differ by a global smooth function, so consumers that need
/// a function on the sphere take differences of local values.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual Jet2 local_jet(const ChartPoint& p) const = 0;

  double local_value(const ChartPoint& p) const {
    return local_jet(p).value().real();
  }

  /// Deviation from the round reference potential; chart-independent.
  double u_value(const ChartPoint& p) const {
    return local_value(p) - round_reference_value(p);
  }
};

/// phi = phi_round + u with u a polynomial in the ambient coordinates.
class PolynomialPotential : public Potential {
 public:
  PolynomialPotential() = default;
  explicit PolynomialPotential(SmoothFunction u) : u_(std::move(u)) {}

  Jet2 local_jet(const ChartPoint& p) const override {
    Jet2 j = round_reference_jet<2>(p);
    if (!u_.is_zero()) j += u_.jet<2>(p);
    return j;
  }

  const SmoothFunction& u() const { return u_; }

 private:
  SmoothFunction u_;
};

inline PolynomialPotential round_potential() { return PolynomialPotential{}; }

}  // namespace dinglab
