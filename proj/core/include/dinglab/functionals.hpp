#pragma once

#include <Eigen/Dense>
#include <utility>

#include "dinglab/geometry.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/potential.hpp"
#include "dinglab/quantization.hpp"

namespace dinglab {

/// Monge-Ampere energy relative to phi0 (vanishes at phi0, adds c for
/// phi0 + c).
double energy(const Potential& phi, const Potential& phi0, const QuadratureGrid& grid);

/// -log integral of e^{-phi}.
double lfunc(const Potential& phi, const QuadratureGrid& grid);

/// Ding functional -E + L; invariant under constant shifts.
double ding(const Potential& phi, const Potential& phi0, const QuadratureGrid& grid);

/// Quantized Monge-Ampere energy, -(1/kN) log det(H H0^{-1}).
double q_energy(const HermitianForm& H, const HermitianForm& H0, int k);

/// Quantized Ding functional -E^(k) + L(FS_k(H)).
double q_ding(const HermitianForm& H, const HermitianForm& H0, int k,
              const QuadratureGrid& grid);

/// Moment map of projective space at the point with conjugated homogeneous
/// coordinates zeta: rank-1, trace-1, PSD.
Eigen::MatrixXcd moment(const Eigen::VectorXcd& zeta);

/// Hamiltonian of the Killing field of Hermitian A.
double hamiltonian(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& zeta);

/// tr(A B M) at the point; complex in general.
Complex trace_abm(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                  const Eigen::VectorXcd& zeta);

/// Fubini-Study Hermitian pairing of the induced vector fields of A and B,
/// via explicit horizontal projection of the ambient lifts.
Complex fs_pairing(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                   const Eigen::VectorXcd& zeta);

/// Average of the moment map over the embedded curve against the canonical
/// measure of FS_k(H); trace 1, PSD.
Eigen::MatrixXcd center_of_mass(const HermitianForm& H, int k, const QuadratureGrid& grid);

/// Bergman geodesic through H in direction A (Hermitian, in the H-orthonormal
/// frame): Gram L exp(-tA) L^dagger.
HermitianForm geodesic_point(const HermitianForm& H, const Eigen::MatrixXcd& A_onb,
                             double t);

/// (finite-difference derivative of D^(k) along the geodesic of A,
///  Killing pairing of A with the gradient k^{-1}(Mbar - Id/N)).
std::pair<double, double> grad_q_ding_check(const HermitianForm& H,
                                            const Eigen::MatrixXcd& A_onb, int k,
                                            const QuadratureGrid& grid);

/// Squared Fubini-Study norms of the components of xi_A at the embedded
/// image of p, tangent and normal to the curve.
std::pair<double, double> tangential_split(const Eigen::MatrixXcd& A_onb,
                                           const HermitianForm& H0, int k,
                                           const ChartPoint& p);

/// Restriction of the Hamiltonian of A to the embedded curve, as a
/// jet-evaluable field on the sphere.
class HamiltonianField : public ScalarField {
 public:
  HamiltonianField(Eigen::MatrixXcd onb_coeffs, Eigen::MatrixXcd A_onb, int k)
      : coeffs_(std::move(onb_coeffs)), a_(std::move(A_onb)), k_(k) {}

  Jet11 jet11(const ChartPoint& p) const override;

 private:
  Eigen::MatrixXcd coeffs_;
  Eigen::MatrixXcd a_;
  int k_;
};

/// Shared step policy for the Richardson-combined finite-difference oracles.
inline constexpr double kFdStep = 1e-3;

/// Richardson-combined central first derivative, O(h^4).
template <typename F>
double fd_derivative(F&& f, double h = kFdStep) {
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

/// Richardson-combined central second derivative, O(h^4).
template <typename F>
double fd_second_derivative(F&& f, double h = kFdStep) {
  const double f0 = f(0.0);
  const double d2h = (f(h) + f(-h) - 2.0 * f0) / (h * h);
  const double d22h = (f(2.0 * h) + f(-2.0 * h) - 2.0 * f0) / (4.0 * h * h);
  return (4.0 * d2h - d22h) / 3.0;
}

}  // namespace dinglab
