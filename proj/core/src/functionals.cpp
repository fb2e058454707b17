#include "dinglab/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "dinglab/errors.hpp"

namespace dinglab {

double energy(const Potential& phi, const Potential& phi0, const QuadratureGrid& grid) {
  const std::vector<double> ma1 = ma_density(phi, grid);
  const std::vector<double> ma0 = ma_density(phi0, grid);
  std::vector<double> integrand(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& p = grid.nodes[i].p;
    const double diff = phi.local_value(p) - phi0.local_value(p);
    integrand[i] = diff * (ma1[i] + ma0[i]);
  }
  return 0.25 * integrate(grid, integrand);
}

double lfunc(const Potential& phi, const QuadratureGrid& grid) {
  return -std::log(canonical_measure(phi, grid).mass);
}

double ding(const Potential& phi, const Potential& phi0, const QuadratureGrid& grid) {
  return -energy(phi, phi0, grid) + lfunc(phi, grid);
}

double q_energy(const HermitianForm& H, const HermitianForm& H0, int k) {
  const double n = static_cast<double>(H.dim());
  return -(H.log_det() - H0.log_det()) / (k * n);
}

double q_ding(const HermitianForm& H, const HermitianForm& H0, int k,
              const QuadratureGrid& grid) {
  return -q_energy(H, H0, k) + lfunc(fs(H, k), grid);
}

Eigen::MatrixXcd moment(const Eigen::VectorXcd& zeta) {
  const double n2 = zeta.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("moment: zero vector");
  return (zeta * zeta.adjoint()) / n2;
}

double hamiltonian(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& zeta) {
  const double n2 = zeta.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("hamiltonian: zero vector");
  return (zeta.adjoint() * A * zeta).value().real() / n2;
}

Complex trace_abm(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                  const Eigen::VectorXcd& zeta) {
  const double n2 = zeta.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("trace_abm: zero vector");
  return (zeta.adjoint() * A * (B * zeta)).value() / n2;
}

Complex fs_pairing(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                   const Eigen::VectorXcd& zeta) {
  const double n2 = zeta.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("fs_pairing: zero vector");
  const Eigen::VectorXcd va = A * zeta;
  const Eigen::VectorXcd vb = B * zeta;
  const Eigen::VectorXcd va_h = va - ((zeta.adjoint() * va).value() / n2) * zeta;
  const Eigen::VectorXcd vb_h = vb - ((zeta.adjoint() * vb).value() / n2) * zeta;
  return (va_h.adjoint() * vb_h).value() / n2;
}

Eigen::MatrixXcd center_of_mass(const HermitianForm& H, int k, const QuadratureGrid& grid) {
  const Eigen::MatrixXcd& C = H.onb();
  const FsPotential phi = fs(H, k);
  const CanonicalMeasure mu = canonical_measure(phi, grid);
  const int n = H.dim();
  Eigen::MatrixXcd mbar = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    const Eigen::VectorXcd zeta = C.adjoint() * monomial_covector(k, node.p);
    mbar.noalias() +=
        (node.weight * mu.density[i] / zeta.squaredNorm()) * (zeta * zeta.adjoint());
  }
  return 0.5 * (mbar + mbar.adjoint());
}

HermitianForm geodesic_point(const HermitianForm& H, const Eigen::MatrixXcd& A_onb,
                             double t) {
  const Eigen::MatrixXcd& L = H.cholesky();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A_onb);
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd exp_ta =
      es.eigenvectors() * (-t * lam.array()).exp().matrix().asDiagonal() *
      es.eigenvectors().adjoint();
  Eigen::MatrixXcd gram = L * exp_ta * L.adjoint();
  return HermitianForm(0.5 * (gram + gram.adjoint()));
}

std::pair<double, double> grad_q_ding_check(const HermitianForm& H,
                                            const Eigen::MatrixXcd& A_onb, int k,
                                            const QuadratureGrid& grid) {
  const double fd = fd_derivative([&](double t) {
    return q_ding(geodesic_point(H, A_onb, t), H, k, grid);
  });
  const int n = H.dim();
  const Eigen::MatrixXcd mbar = center_of_mass(H, k, grid);
  const Eigen::MatrixXcd grad =
      (mbar - Eigen::MatrixXcd::Identity(n, n) / n) / k;
  const double pairing = (A_onb * grad).trace().real();
  return {fd, pairing};
}

std::pair<double, double> tangential_split(const Eigen::MatrixXcd& A_onb,
                                           const HermitianForm& H0, int k,
                                           const ChartPoint& p) {
  const Eigen::MatrixXcd jets = section_jets(H0.onb(), k, p);
  const Eigen::VectorXcd zeta = jets.row(0).conjugate().transpose();
  const Eigen::VectorXcd tangent = jets.row(1).conjugate().transpose();
  const double n2 = zeta.squaredNorm();
  const auto horizontal = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return v - ((zeta.adjoint() * v).value() / n2) * zeta;
  };
  const Eigen::VectorXcd v_h = horizontal(A_onb * zeta);
  const Eigen::VectorXcd t_h = horizontal(tangent);
  const double t2 = t_h.squaredNorm();
  if (!(t2 > 0.0))
    throw std::logic_error("tangential_split: vanishing curve tangent (embedding not immersive?)");
  const double top = std::norm((t_h.adjoint() * v_h).value()) / (t2 * n2);
  const double total = v_h.squaredNorm() / n2;
  return {top, std::max(0.0, total - top)};
}

Jet11 HamiltonianField::jet11(const ChartPoint& p) const {
  const Eigen::MatrixXcd jets = section_jets(coeffs_, k_, p);
  const Eigen::VectorXcd z0 = jets.row(0).transpose();
  const Eigen::VectorXcd z1 = jets.row(1).transpose();
  const Eigen::VectorXcd u0 = z0.conjugate();
  const Eigen::VectorXcd u1 = z1.conjugate();
  const Eigen::VectorXcd au0 = a_ * u0;
  const Eigen::VectorXcd au1 = a_ * u1;
  const auto dot_nc = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.cwiseProduct(b).sum();
  };
  Jet1 num, den;
  num.at(0, 0) = dot_nc(z0, au0);
  num.at(1, 0) = dot_nc(z1, au0);
  num.at(0, 1) = dot_nc(z0, au1);
  num.at(1, 1) = dot_nc(z1, au1);
  den.at(0, 0) = dot_nc(z0, u0);
  den.at(1, 0) = dot_nc(z1, u0);
  den.at(0, 1) = dot_nc(z0, u1);
  den.at(1, 1) = dot_nc(z1, u1);
  return to_jet11(num / den);
}

}  // namespace dinglab
