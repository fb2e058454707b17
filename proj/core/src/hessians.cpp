#include "dinglab/hessians.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "dinglab/errors.hpp"

namespace dinglab {

namespace {

/// Per-node ONB-frame covectors and canonical measure of FS_k(H0).
struct FsFrame {
  FsPotential phi;
  CanonicalMeasure mu;
  std::vector<Eigen::VectorXcd> zeta;
};

FsFrame make_fs_frame(const HermitianForm& H0, int k, const QuadratureGrid& grid) {
  FsFrame f{fs(H0, k), {}, {}};
  f.mu = canonical_measure(f.phi, grid);
  const Eigen::MatrixXcd& C = H0.onb();
  f.zeta.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    f.zeta[i] = C.adjoint() * monomial_covector(k, grid.nodes[i].p);
  return f;
}

}  // namespace

double ding_hessian(const ScalarField& f, const ScalarField& g, const Potential& phi,
                    const QuadratureGrid& grid) {
  const CanonicalMeasure mu = canonical_measure(phi, grid);
  const std::vector<Complex> gp = grad_pair(f, g, phi, grid);
  const std::size_t m = grid.nodes.size();
  std::vector<double> t_grad(m), t_fg(m), t_f(m), t_g(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = grid.nodes[i].p;
    const double fv = f.value(p);
    const double gv = g.value(p);
    t_grad[i] = mu.density[i] * gp[i].real();
    t_fg[i] = mu.density[i] * fv * gv;
    t_f[i] = mu.density[i] * fv;
    t_g[i] = mu.density[i] * gv;
  }
  return integrate(grid, t_grad) - integrate(grid, t_fg) +
         integrate(grid, t_f) * integrate(grid, t_g);
}

double ding_second_derivative_along_path(const ScalarField& f, const Potential& phi0,
                                         const QuadratureGrid& grid) {
  // d^2/dt^2 D(phi0 + t f) at t = 0: the energy part contributes
  // (1/2) int |df|^2 MA after integration by parts, and the L part gives
  // minus the variance of f against the canonical measure.
  const std::vector<double> ma = ma_density(phi0, grid);
  const CanonicalMeasure mu = canonical_measure(phi0, grid);
  const std::vector<Complex> gp = grad_pair(f, f, phi0, grid);
  const std::size_t m = grid.nodes.size();
  std::vector<double> t_e(m), t_f2(m), t_f(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = grid.nodes[i].p;
    const double fv = f.value(p);
    t_e[i] = 0.5 * gp[i].real() * ma[i];
    t_f2[i] = fv * fv * mu.density[i];
    t_f[i] = fv * mu.density[i];
  }
  const double mf = integrate(grid, t_f);
  return integrate(grid, t_e) - integrate(grid, t_f2) + mf * mf;
}

double q_ding_hessian(const Eigen::MatrixXcd& A_onb, const Eigen::MatrixXcd& B_onb,
                      const HermitianForm& H0, int k, const QuadratureGrid& grid) {
  const FsFrame fr = make_fs_frame(H0, k, grid);
  const std::size_t m = grid.nodes.size();
  std::vector<double> t_pair(m), t_hh(m), t_a(m), t_b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXcd& z = fr.zeta[i];
    const double ha = hamiltonian(A_onb, z);
    const double hb = hamiltonian(B_onb, z);
    t_pair[i] = fr.mu.density[i] * fs_pairing(A_onb, B_onb, z).real();
    t_hh[i] = fr.mu.density[i] * ha * hb;
    t_a[i] = fr.mu.density[i] * ha;
    t_b[i] = fr.mu.density[i] * hb;
  }
  const double kk = static_cast<double>(k);
  return integrate(grid, t_pair) / kk - integrate(grid, t_hh) / (kk * kk) +
         integrate(grid, t_a) * integrate(grid, t_b) / (kk * kk);
}

double q_ding_hessian_trace(const Eigen::MatrixXcd& A_onb, const Eigen::MatrixXcd& B_onb,
                            const HermitianForm& H0, int k, const QuadratureGrid& grid) {
  const FsFrame fr = make_fs_frame(H0, k, grid);
  const std::size_t m = grid.nodes.size();
  std::vector<double> t_tr(m), t_hh(m), t_a(m), t_b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXcd& z = fr.zeta[i];
    const double ha = hamiltonian(A_onb, z);
    const double hb = hamiltonian(B_onb, z);
    t_tr[i] = fr.mu.density[i] * trace_abm(A_onb, B_onb, z).real();
    t_hh[i] = fr.mu.density[i] * ha * hb;
    t_a[i] = fr.mu.density[i] * ha;
    t_b[i] = fr.mu.density[i] * hb;
  }
  const double kk = static_cast<double>(k);
  return integrate(grid, t_tr) / kk -
         (1.0 + 1.0 / kk) * integrate(grid, t_hh) / kk +
         integrate(grid, t_a) * integrate(grid, t_b) / (kk * kk);
}

double q_ding_hessian_fd(const Eigen::MatrixXcd& A_onb, const HermitianForm& H0, int k,
                         const QuadratureGrid& grid) {
  return fd_second_derivative([&](double t) {
    return q_ding(geodesic_point(H0, A_onb, t), H0, k, grid);
  });
}

double HessianReport::max_residual() const {
  return std::max(std::abs(formula - trace_form),
                  std::max(std::abs(formula - fd_geodesic),
                           std::abs(trace_form - fd_geodesic)));
}

HessianReport hessian_report(const Eigen::MatrixXcd& A_onb, const HermitianForm& H0,
                             int k, const QuadratureGrid& grid) {
  HessianReport r;
  r.k = k;
  r.formula = q_ding_hessian(A_onb, A_onb, H0, k, grid);
  r.trace_form = q_ding_hessian_trace(A_onb, A_onb, H0, k, grid);
  r.fd_geodesic = q_ding_hessian_fd(A_onb, H0, k, grid);
  return r;
}

CorollaryDecomposition corollary_decomposition(const Eigen::MatrixXcd& A_onb,
                                               const HermitianForm& H0, int k,
                                               const QuadratureGrid& grid) {
  CorollaryDecomposition d;
  d.total = q_ding_hessian(A_onb, A_onb, H0, k, grid);
  const FsPotential phi = fs(H0, k);
  const HamiltonianField h(H0.onb(), A_onb, k);
  const double kk = static_cast<double>(k);
  d.base = ding_hessian(h, h, phi, grid) / (kk * kk);
  const CanonicalMeasure mu = canonical_measure(phi, grid);
  std::vector<double> t_perp(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const auto split = tangential_split(A_onb, H0, k, grid.nodes[i].p);
    t_perp[i] = mu.density[i] * split.second;
  }
  d.normal = integrate(grid, t_perp) / kk;
  return d;
}

std::vector<Eigen::MatrixXcd> hermitian_basis(int n) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex ir{0.0, r};
  std::vector<Eigen::MatrixXcd> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
      s(i, j) = r;
      s(j, i) = r;
      basis.push_back(std::move(s));
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
      a(i, j) = ir;
      a(j, i) = -ir;
      basis.push_back(std::move(a));
    }
  return basis;
}

namespace {

// Compact (type, i, j) enumeration matching hermitian_basis ordering.
struct BasisIndex {
  int type;  // 0 diag, 1 symmetric, 2 antisymmetric
  int i, j;
};

std::vector<BasisIndex> basis_indices(int n) {
  std::vector<BasisIndex> idx;
  idx.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) idx.push_back({0, i, i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      idx.push_back({1, i, j});
      idx.push_back({2, i, j});
    }
  return idx;
}

// Nonzero entries of one basis element.
struct Triplet {
  int r, c;
  Complex v;
};

void fill_triplets(const BasisIndex& b, Triplet out[2], int& count) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (b.type) {
    case 0:
      out[0] = {b.i, b.i, Complex{1.0, 0.0}};
      count = 1;
      break;
    case 1:
      out[0] = {b.i, b.j, Complex{r, 0.0}};
      out[1] = {b.j, b.i, Complex{r, 0.0}};
      count = 2;
      break;
    default:
      out[0] = {b.i, b.j, Complex{0.0, r}};
      out[1] = {b.j, b.i, Complex{0.0, -r}};
      count = 2;
      break;
  }
}

}  // namespace

Eigen::VectorXd q_hessian_spectrum(const HermitianForm& H0, int k,
                                   const QuadratureGrid& grid) {
  const int n = H0.dim();
  if (static_cast<long long>(n) * n > 10000)
    throw std::invalid_argument("q_hessian_spectrum: basis dimension N^2 exceeds 10^4");
  const FsFrame fr = make_fs_frame(H0, k, grid);
  const std::vector<BasisIndex> idx = basis_indices(n);
  const int np = static_cast<int>(idx.size());
  const std::size_t m = grid.nodes.size();
  const double kk = static_cast<double>(k);
  const double sqrt2 = std::sqrt(2.0);

  // Center of mass against the canonical measure of FS_k(H0), and the
  // weighted second moments int H_a H_b mu via chunked products.
  Eigen::MatrixXcd mbar = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXd mvec = Eigen::VectorXd::Zero(np);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(np, np);
  const std::size_t chunk = 256;
  Eigen::MatrixXd hmat(np, chunk);
  Eigen::MatrixXd hw(np, chunk);
  for (std::size_t start = 0; start < m; start += chunk) {
    const std::size_t stop = std::min(m, start + chunk);
    const int cols = static_cast<int>(stop - start);
    for (std::size_t i = start; i < stop; ++i) {
      const int col = static_cast<int>(i - start);
      const Eigen::VectorXcd xi = fr.zeta[i] / fr.zeta[i].norm();
      const double w = grid.nodes[i].weight * fr.mu.density[i];
      mbar.noalias() += w * (xi * xi.adjoint());
      for (int a = 0; a < np; ++a) {
        const BasisIndex& b = idx[a];
        double h;
        if (b.type == 0) {
          h = std::norm(xi[b.i]);
        } else {
          const Complex prod = std::conj(xi[b.i]) * xi[b.j];
          h = (b.type == 1) ? sqrt2 * prod.real() : -sqrt2 * prod.imag();
        }
        hmat(a, col) = h;
        hw(a, col) = w * h;
        mvec[a] += w * h;
      }
    }
    s2.noalias() += hmat.leftCols(cols) * hw.leftCols(cols).transpose();
  }
  mbar = 0.5 * (mbar + mbar.adjoint());

  // S_ab = k^{-1} Re tr(E_a E_b Mbar) - k^{-1}(1 + k^{-1}) int H_a H_b mu
  //        + k^{-2} m_a m_b.
  Eigen::MatrixXd s(np, np);
  Triplet ta[2], tb[2];
  int ca = 0, cb = 0;
  for (int a = 0; a < np; ++a) {
    fill_triplets(idx[a], ta, ca);
    for (int b = a; b < np; ++b) {
      fill_triplets(idx[b], tb, cb);
      Complex tr{0.0, 0.0};
      for (int u = 0; u < ca; ++u)
        for (int v = 0; v < cb; ++v)
          if (ta[u].c == tb[v].r) tr += ta[u].v * tb[v].v * mbar(tb[v].c, ta[u].r);
      const double val = tr.real() / kk - (1.0 + 1.0 / kk) * s2(a, b) / kk +
                         mvec[a] * mvec[b] / (kk * kk);
      s(a, b) = val;
      s(b, a) = val;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalError("q_hessian_spectrum: eigensolver failed");
  return es.eigenvalues();
}

std::vector<Eigen::MatrixXcd> automorphism_directions(const HermitianForm& H0, int k) {
  const int n = 2 * k + 1;
  if (H0.dim() != n)
    throw std::invalid_argument("automorphism_directions: form dimension does not match k");
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);   // d/dw
  Eigen::MatrixXcd hd = Eigen::MatrixXcd::Zero(n, n);  // w d/dw - k
  for (int j = 0; j < n; ++j) {
    if (j >= 1) e(j - 1, j) = static_cast<double>(j);
    hd(j, j) = static_cast<double>(j - k);
  }
  const Eigen::MatrixXcd& c = H0.onb();
  const Eigen::MatrixXcd cinv = H0.cholesky().adjoint();
  const Eigen::MatrixXcd e_s = cinv * e * c;
  const Eigen::MatrixXcd hd_s = cinv * hd * c;
  std::vector<Eigen::MatrixXcd> dirs;
  dirs.push_back(Eigen::MatrixXcd::Identity(n, n));
  dirs.push_back(0.5 * (hd_s + hd_s.adjoint()));
  dirs.push_back(e_s + e_s.adjoint());
  dirs.push_back(Complex{0.0, 1.0} * (e_s - e_s.adjoint()));
  return dirs;
}

}  // namespace dinglab
