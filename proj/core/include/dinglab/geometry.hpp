#pragma once

#include <complex>
#include <vector>

#include "dinglab/expr.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/jet.hpp"
#include "dinglab/potential.hpp"

namespace dinglab {

/// Nodes where d_w d_wbar phi falls at or below this abort with
/// DegenerateMetricError; no clamping.
inline constexpr double kDegenerateThreshold = 1e-12;

/// Real-valued function on the sphere evaluable as an order-(1,1) jet in a
/// chart. Covers both polynomials and quantization-induced Hamiltonians.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual Jet11 jet11(const ChartPoint& p) const = 0;
  double value(const ChartPoint& p) const { return jet11(p).v.real(); }
};

class PolyField : public ScalarField {
 public:
  explicit PolyField(SmoothFunction f) : f_(std::move(f)) {}
  Jet11 jet11(const ChartPoint& p) const override { return to_jet11(f_.jet<1>(p)); }
  const SmoothFunction& poly() const { return f_; }

 private:
  SmoothFunction f_;
};

/// d_w d_wbar of the local potential at p; throws on degeneracy.
double metric_density(const Potential& phi, const ChartPoint& p);

/// Per-node density of MA(phi) relative to the round probability measure;
/// integrates to 2 (the anticanonical degree).
std::vector<double> ma_density(const Potential& phi, const QuadratureGrid& grid);

struct CanonicalMeasure {
  double mass = 0.0;                  // integral of e^{-phi}
  std::vector<double> density;        // of mu_phi, relative to the round measure
};

/// The normalized canonical measure of phi.
CanonicalMeasure canonical_measure(const Potential& phi, const QuadratureGrid& grid);

/// Per-node values of the dbar-Laplacian of f with respect to phi.
std::vector<double> laplacian(const ScalarField& f, const Potential& phi,
                              const QuadratureGrid& grid);

/// Per-node values of the Hermitian gradient pairing
/// (df, dg)_phi = f_w conj(g_w) / phi_{w wbar}.
std::vector<Complex> grad_pair(const ScalarField& f, const ScalarField& g,
                               const Potential& phi, const QuadratureGrid& grid);

/// Per-node values of the Ricci potential h_phi = log(mu_phi / MA(phi)).
std::vector<double> ricci_potential(const Potential& phi, const QuadratureGrid& grid);

/// Per-node scalar curvature of omega_phi.
std::vector<double> scalar_curvature(const Potential& phi, const QuadratureGrid& grid);

/// The Ricci potential as a jet-evaluable field (jets from nested
/// differentiation of the local potential; the mass is a fixed scalar).
class RicciField : public ScalarField {
 public:
  RicciField(const Potential& phi, double canonical_mass)
      : phi_(&phi), log_mass_(std::log(canonical_mass)) {}
  Jet11 jet11(const ChartPoint& p) const override;

 private:
  const Potential* phi_;
  double log_mass_;
};

}  // namespace dinglab
