#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "dinglab/geometry.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/potential.hpp"

namespace dinglab {

/// Reference monomial basis of the degree-2k sections: w^j (j = 0..2k) in
/// the North chart, w'^{2k-j} in the South chart. N = 2k + 1.
struct SectionBasis {
  int k = 1;
  int dim() const { return 2 * k + 1; }
};

/// Conjugated section values at p in p's chart, unweighted.
Eigen::VectorXcd monomial_covector(int k, const ChartPoint& p);

/// Conjugated section values times e^{-k phi_loc / 2}; the entrywise
/// products zeta_a conj(zeta_b) are the chart-invariant pointwise inner
/// products of the sections.
Eigen::VectorXcd weighted_covector(int k, const ChartPoint& p, double phi_loc);

/// Holomorphic 2-jets (value, first, half-second derivative in the chart
/// coordinate) of the sections s * C at p. Row m holds the m-th jet
/// coefficient for every section.
Eigen::MatrixXcd section_jets(const Eigen::MatrixXcd& coeffs, int k, const ChartPoint& p);

/// Positive-definite Hermitian form on the section space, stored as the
/// Gram matrix in the reference monomial basis.
class HermitianForm {
 public:
  explicit HermitianForm(Eigen::MatrixXcd gram);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Eigen::MatrixXcd& gram() const { return gram_; }

  /// Lower Cholesky factor; throws IndefiniteFormError if any pivot falls
  /// below 1e-12 relative to its own diagonal entry of the Gram matrix.
  const Eigen::MatrixXcd& cholesky() const;

  /// Basis-change C with (s * C) orthonormal for this form; C = L^{-dagger}.
  const Eigen::MatrixXcd& onb() const;

  double log_det() const;

 private:
  Eigen::MatrixXcd gram_;
  mutable std::optional<Eigen::MatrixXcd> chol_;
  mutable std::optional<Eigen::MatrixXcd> onb_;
};

/// L2 Gram matrix of the monomial basis against e^{-k phi} MA(phi).
HermitianForm hilb(const Potential& phi, int k, const QuadratureGrid& grid);

/// The projective pullback metric of a Hermitian form, as a Potential.
class FsPotential : public Potential {
 public:
  FsPotential(Eigen::MatrixXcd onb_coeffs, int k)
      : coeffs_(std::move(onb_coeffs)), k_(k) {}

  Jet2 local_jet(const ChartPoint& p) const override;

  const Eigen::MatrixXcd& onb_coeffs() const { return coeffs_; }
  int k() const { return k_; }

 private:
  Eigen::MatrixXcd coeffs_;
  int k_;
};

FsPotential fs(const HermitianForm& H, int k);

/// Everything downstream operators need about one (phi0, k) pair:
/// the Gram form, its orthonormal frame, and per-node data.
struct QuantizedFrame {
  int k = 1;
  HermitianForm H;
  Eigen::MatrixXcd C;                       // monomial -> ONB
  std::vector<Eigen::VectorXcd> zeta;       // weighted ONB covectors per node
  std::vector<double> ma;                   // MA(phi0) density per node
  std::vector<double> rho;                  // Bergman function per node

  int dim() const { return 2 * k + 1; }
};

QuantizedFrame make_frame(const Potential& phi0, int k, const QuadratureGrid& grid);

/// Pointwise sum of squared norms of a Hilbert-orthonormal basis.
std::vector<double> bergman_rho(const Potential& phi0, int k, const QuadratureGrid& grid);

/// Derivative of the Hilbert map in direction f, in the orthonormal frame.
Eigen::MatrixXcd q_matrix(const ScalarField& f, const QuantizedFrame& frame,
                          const Potential& phi0, const QuadratureGrid& grid);
Eigen::MatrixXcd q_matrix(const ScalarField& f, const Potential& phi0, int k,
                          const QuadratureGrid& grid);

/// Multiply-then-project operator of f, in the orthonormal frame.
Eigen::MatrixXcd toeplitz(const ScalarField& f, const QuantizedFrame& frame,
                          const QuadratureGrid& grid);
Eigen::MatrixXcd toeplitz(const ScalarField& f, const Potential& phi0, int k,
                          const QuadratureGrid& grid);

/// Diagonal kernels of T_f and of T_f T_g.
std::pair<std::vector<double>, std::vector<double>> kernel_diagonals(
    const ScalarField& f, const ScalarField& g, const QuantizedFrame& frame,
    const QuadratureGrid& grid);

}  // namespace dinglab
