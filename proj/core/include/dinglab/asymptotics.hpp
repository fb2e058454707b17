#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dinglab/geometry.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/hessians.hpp"
#include "dinglab/potential.hpp"
#include "dinglab/quantization.hpp"

namespace dinglab {

/// Least-squares fit of samples (k, y) against
/// y ~ c_0 k^n + c_1 k^{n-1} + ... + c_p k^{n-p}.
struct ExpansionFit {
  int leading_power = 0;
  Eigen::VectorXd coeffs;            // c_0 .. c_p
  double rms_residual = 0.0;
  std::vector<int> ks;
};

ExpansionFit fit_expansion(const std::vector<std::pair<double, double>>& samples,
                           int leading_power, int order);

/// Row weights turning per-k samples into fitted coefficients: coefficient
/// c_m of a node equals sum_j weights(m, j) * sample_j. Shared across nodes.
Eigen::MatrixXd expansion_weights(const std::vector<int>& ks, int leading_power,
                                  int order);

/// Slope of log|y| against log k by least squares; ignores zero samples.
double log_log_slope(const std::vector<std::pair<double, double>>& samples);

/// Node-wise fitted coefficients of the Toeplitz kernels K_f and K_{f,f},
/// next to the predicted leading terms.
struct KernelCoefficients {
  std::vector<int> ks;
  std::vector<double> kf_c0, kf_c1;    // K_f ~ k(c0 + c1/k + ...)
  std::vector<double> kff_c0, kff_c1;  // K_{f,f} ~ k^2(c0 + c1/k + ...)
  std::vector<double> f_values;        // predicted kf_c0
  std::vector<double> f_squared;       // predicted kff_c0
  std::vector<double> kf_b1;           // (S/2) f + lap f
  // Two readings of the gradient term in the subleading K_{f,f} coefficient;
  // which matches is decided empirically downstream.
  std::vector<double> kff_b1_half;     // S f^2 / 2 + 2 f lap f + |df|^2 / 2
  std::vector<double> kff_b1_full;     // S f^2 / 2 + 2 f lap f + |df|^2
};

KernelCoefficients verify_kernel_coefficients(const ScalarField& f,
                                              const Potential& phi0,
                                              const std::vector<int>& ks,
                                              const QuadratureGrid& grid);

/// The three terms of the quantized Hessian diagonal split at H = Hilb_k(phi0).
struct ATerms {
  int k = 0;
  double a1 = 0.0;  // k^{-1} int tr(Q^2 M) mu
  double a2 = 0.0;  // -k^{-1}(1 + k^{-1}) int H(Q)^2 mu
  double a3 = 0.0;  // k^{-2} (int H(Q) mu)^2
  double sum() const { return a1 + a2 + a3; }
};

ATerms a_terms(const ScalarField& f, const Potential& phi0, int k,
               const QuadratureGrid& grid);

/// Expansion data for the Hamiltonian H(Q_{f,k}) along the embedded curve
/// and for the canonical mass defect of the induced potentials.
struct HExpansionReport {
  std::vector<int> ks;
  std::vector<double> h_c0;           // node-wise leading coefficient, H ~ k(c0 + ...)
  std::vector<double> h_c1;           // subleading
  std::vector<double> f_values;       // predicted h_c0
  std::vector<double> mass_defect;    // per k: mass ratio of induced vs base - 1
  double mass_defect_slope = 0.0;     // log-log decay power
};

HExpansionReport verify_h_expansion(const ScalarField& f, const Potential& phi0,
                                    const std::vector<int>& ks,
                                    const QuadratureGrid& grid);

/// Quantized Hessian diagonal at Hilb_k(phi0) in direction Q_{f,k} against
/// the Ding Hessian limit.
struct ConvergenceRow {
  int k = 0;
  double quantized = 0.0;
  double limit = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double limit = 0.0;
  double slope = 0.0;  // log-log decay of |error| over the last three levels
};

ConvergenceReport hessian_convergence(const ScalarField& f, const Potential& phi0,
                                      const std::vector<int>& ks,
                                      const QuadratureGrid& grid);

}  // namespace dinglab
