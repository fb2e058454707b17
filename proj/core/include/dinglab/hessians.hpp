#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dinglab/functionals.hpp"
#include "dinglab/geometry.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/potential.hpp"
#include "dinglab/quantization.hpp"

namespace dinglab {

/// Hessian of the Ding functional at phi:
/// int Re(df, dg) mu - int f g mu + int f mu * int g mu.
double ding_hessian(const ScalarField& f, const ScalarField& g, const Potential& phi,
                    const QuadratureGrid& grid);

/// Plain second derivative of the Ding functional along the affine path
/// phi + t f, from the closed-form integrand at t = 0 (no differencing).
double ding_second_derivative_along_path(const ScalarField& f, const Potential& phi0,
                                         const QuadratureGrid& grid);

/// Hessian of the quantized Ding functional at H0, evaluated through the
/// Fubini-Study pairing of the induced vector fields.
double q_ding_hessian(const Eigen::MatrixXcd& A_onb, const Eigen::MatrixXcd& B_onb,
                      const HermitianForm& H0, int k, const QuadratureGrid& grid);

/// Same form through tr(ABM); agrees with q_ding_hessian to quadrature
/// accuracy.
double q_ding_hessian_trace(const Eigen::MatrixXcd& A_onb, const Eigen::MatrixXcd& B_onb,
                            const HermitianForm& H0, int k, const QuadratureGrid& grid);

/// Richardson-combined second difference of D^(k) along the Bergman
/// geodesic of A.
double q_ding_hessian_fd(const Eigen::MatrixXcd& A_onb, const HermitianForm& H0, int k,
                         const QuadratureGrid& grid);

/// One diagonal Hessian value computed three ways.
struct HessianReport {
  int k = 0;
  double formula = 0.0;     // Fubini-Study pairing route
  double trace_form = 0.0;  // tr(ABM) route
  double fd_geodesic = 0.0; // finite differences along the geodesic
  double max_residual() const;
};

HessianReport hessian_report(const Eigen::MatrixXcd& A_onb, const HermitianForm& H0,
                             int k, const QuadratureGrid& grid);

/// Split of the diagonal quantized Hessian into the pulled-back Ding
/// Hessian of the Hamiltonian and the normal-component energy.
struct CorollaryDecomposition {
  double total = 0.0;
  double base = 0.0;    // k^{-2} * Ding Hessian of H(A) restricted to the curve
  double normal = 0.0;  // k^{-1} * integral of |xi_A normal|^2
};

CorollaryDecomposition corollary_decomposition(const Eigen::MatrixXcd& A_onb,
                                               const HermitianForm& H0, int k,
                                               const QuadratureGrid& grid);

/// Orthonormal basis of the real vector space of Hermitian N x N matrices
/// under tr(AB): diagonal units, symmetric and antisymmetric pairs.
std::vector<Eigen::MatrixXcd> hermitian_basis(int n);

/// Ascending eigenvalues of the quantized Hessian quadratic form on the
/// Hermitian matrices, with respect to the tr(AB) inner product.
/// Guard: N^2 <= 10^4.
Eigen::VectorXd q_hessian_spectrum(const HermitianForm& H0, int k,
                                   const QuadratureGrid& grid);

/// Hermitian directions spanning the automorphism algebra image in the
/// orthonormal frame of H0; exact at the round balanced form.
std::vector<Eigen::MatrixXcd> automorphism_directions(const HermitianForm& H0, int k);

}  // namespace dinglab
