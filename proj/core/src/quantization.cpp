#include "dinglab/quantization.hpp"

#include <cmath>

#include "dinglab/errors.hpp"

namespace dinglab {

Eigen::VectorXcd monomial_covector(int k, const ChartPoint& p) {
  const int n = 2 * k + 1;
  Eigen::VectorXcd zeta(n);
  const Complex wb = std::conj(p.w);
  Complex pw{1.0, 0.0};
  if (p.chart == Chart::North) {
    for (int j = 0; j < n; ++j) {
      zeta[j] = pw;
      pw *= wb;
    }
  } else {
    for (int j = n - 1; j >= 0; --j) {
      zeta[j] = pw;
      pw *= wb;
    }
  }
  return zeta;
}

Eigen::VectorXcd weighted_covector(int k, const ChartPoint& p, double phi_loc) {
  return std::exp(-0.5 * k * phi_loc) * monomial_covector(k, p);
}

Eigen::MatrixXcd section_jets(const Eigen::MatrixXcd& coeffs, int k, const ChartPoint& p) {
  const int n = 2 * k + 1;
  Eigen::MatrixXcd mono(3, n);
  // Holomorphic jets of w^e in the chart coordinate: (w^e, e w^{e-1},
  // e(e-1)/2 w^{e-2}).
  std::vector<Complex> pw(n + 1);
  pw[0] = Complex{1.0, 0.0};
  for (int m = 1; m <= n; ++m) pw[m] = pw[m - 1] * p.w;
  for (int j = 0; j < n; ++j) {
    const int e = (p.chart == Chart::North) ? j : (n - 1 - j);
    mono(0, j) = pw[e];
    mono(1, j) = (e >= 1) ? static_cast<double>(e) * pw[e - 1] : Complex{0.0, 0.0};
    mono(2, j) = (e >= 2) ? 0.5 * e * (e - 1.0) * pw[e - 2] : Complex{0.0, 0.0};
  }
  return mono * coeffs;
}

HermitianForm::HermitianForm(Eigen::MatrixXcd gram) : gram_(std::move(gram)) {
  const Eigen::MatrixXcd sym = 0.5 * (gram_ + gram_.adjoint());
  const double drift = (gram_ - sym).norm();
  const double scale = std::max(1.0, sym.norm());
  if (drift > 1e-13 * scale)
    throw IndefiniteFormError("matrix is not Hermitian within tolerance");
  gram_ = sym;
}

const Eigen::MatrixXcd& HermitianForm::cholesky() const {
  if (!chol_) {
    Eigen::LLT<Eigen::MatrixXcd> llt(gram_);
    if (llt.info() != Eigen::Success)
      throw IndefiniteFormError("Cholesky factorization failed: form is not positive definite");
    Eigen::MatrixXcd L = llt.matrixL();
    // Pivot test relative to the matching diagonal entry: the Gram matrix of
    // the monomial scaffold is legitimately scaled across ~20 decades at
    // large k, so a test against the max diagonal would reject it.
    for (int i = 0; i < L.rows(); ++i) {
      const double pivot = std::norm(L(i, i));
      if (!(pivot > 1e-12 * gram_(i, i).real()))
        throw IndefiniteFormError("Cholesky pivot below threshold: form is numerically singular");
    }
    chol_ = std::move(L);
  }
  return *chol_;
}

const Eigen::MatrixXcd& HermitianForm::onb() const {
  if (!onb_) {
    const Eigen::MatrixXcd& L = cholesky();
    const int n = dim();
    onb_ = L.adjoint()
               .triangularView<Eigen::Upper>()
               .solve(Eigen::MatrixXcd::Identity(n, n));
  }
  return *onb_;
}

double HermitianForm::log_det() const {
  const Eigen::MatrixXcd& L = cholesky();
  double s = 0.0;
  for (int i = 0; i < L.rows(); ++i) s += std::log(std::norm(L(i, i)));
  return s;
}

HermitianForm hilb(const Potential& phi, int k, const QuadratureGrid& grid) {
  const int n = 2 * k + 1;
  const std::vector<double> ma = ma_density(phi, grid);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    const Eigen::VectorXcd zeta =
        weighted_covector(k, node.p, phi.local_value(node.p));
    gram.noalias() += (node.weight * ma[i]) * (zeta * zeta.adjoint());
  }
  return HermitianForm(std::move(gram));
}

Jet2 FsPotential::local_jet(const ChartPoint& p) const {
  const Eigen::MatrixXcd jets = section_jets(coeffs_, k_, p);
  // S = sum_i |sigma_i(w)|^2 as a (2,2)-jet from the holomorphic jets.
  Jet2 S;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Complex s{0.0, 0.0};
      for (int i = 0; i < jets.cols(); ++i) s += jets(a, i) * std::conj(jets(b, i));
      S.at(a, b) = s;
    }
  return (1.0 / k_) * (log(S) - std::log(static_cast<double>(k_)));
}

FsPotential fs(const HermitianForm& H, int k) { return FsPotential(H.onb(), k); }

QuantizedFrame make_frame(const Potential& phi0, int k, const QuadratureGrid& grid) {
  QuantizedFrame frame{k, hilb(phi0, k, grid), {}, {}, {}, {}};
  frame.C = frame.H.onb();
  frame.ma = ma_density(phi0, grid);
  frame.zeta.resize(grid.nodes.size());
  frame.rho.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    frame.zeta[i] = frame.C.adjoint() *
                    weighted_covector(k, node.p, phi0.local_value(node.p));
    frame.rho[i] = frame.zeta[i].squaredNorm();
  }
  return frame;
}

std::vector<double> bergman_rho(const Potential& phi0, int k, const QuadratureGrid& grid) {
  return make_frame(phi0, k, grid).rho;
}

Eigen::MatrixXcd q_matrix(const ScalarField& f, const QuantizedFrame& frame,
                          const Potential& phi0, const QuadratureGrid& grid) {
  const int n = frame.dim();
  const std::vector<double> lap = laplacian(f, phi0, grid);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    const double g = frame.k * f.value(node.p) - lap[i];
    q.noalias() += (node.weight * frame.ma[i] * g) *
                   (frame.zeta[i] * frame.zeta[i].adjoint());
  }
  return 0.5 * (q + q.adjoint());
}

Eigen::MatrixXcd q_matrix(const ScalarField& f, const Potential& phi0, int k,
                          const QuadratureGrid& grid) {
  return q_matrix(f, make_frame(phi0, k, grid), phi0, grid);
}

Eigen::MatrixXcd toeplitz(const ScalarField& f, const QuantizedFrame& frame,
                          const QuadratureGrid& grid) {
  const int n = frame.dim();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto& node = grid.nodes[i];
    t.noalias() += (node.weight * frame.ma[i] * f.value(node.p)) *
                   (frame.zeta[i] * frame.zeta[i].adjoint());
  }
  return 0.5 * (t + t.adjoint());
}

Eigen::MatrixXcd toeplitz(const ScalarField& f, const Potential& phi0, int k,
                          const QuadratureGrid& grid) {
  return toeplitz(f, make_frame(phi0, k, grid), grid);
}

std::pair<std::vector<double>, std::vector<double>> kernel_diagonals(
    const ScalarField& f, const ScalarField& g, const QuantizedFrame& frame,
    const QuadratureGrid& grid) {
  const Eigen::MatrixXcd tf = toeplitz(f, frame, grid);
  const Eigen::MatrixXcd tg = toeplitz(g, frame, grid);
  const Eigen::MatrixXcd tfg = tf * tg;
  std::vector<double> kf(grid.nodes.size()), kfg(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const Eigen::VectorXcd& z = frame.zeta[i];
    kf[i] = (z.adjoint() * tf * z).value().real();
    kfg[i] = (z.adjoint() * tfg * z).value().real();
  }
  return {std::move(kf), std::move(kfg)};
}

}  // namespace dinglab
