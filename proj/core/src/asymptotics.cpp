#include "dinglab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "dinglab/errors.hpp"
#include "dinglab/functionals.hpp"

namespace dinglab {

namespace {

Eigen::MatrixXd design_matrix(const std::vector<double>& ks, int leading_power,
                              int order) {
  const int rows = static_cast<int>(ks.size());
  Eigen::MatrixXd x(rows, order + 1);
  for (int i = 0; i < rows; ++i)
    for (int m = 0; m <= order; ++m)
      x(i, m) = std::pow(ks[static_cast<std::size_t>(i)], leading_power - m);
  return x;
}

}  // namespace

ExpansionFit fit_expansion(const std::vector<std::pair<double, double>>& samples,
                           int leading_power, int order) {
  if (static_cast<int>(samples.size()) < order + 2)
    throw std::invalid_argument("fit_expansion: need at least order + 2 samples");
  std::vector<double> ks(samples.size());
  Eigen::VectorXd y(static_cast<int>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ks[i] = samples[i].first;
    y[static_cast<int>(i)] = samples[i].second;
  }
  const Eigen::MatrixXd x = design_matrix(ks, leading_power, order);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols())
    throw NumericalError("fit_expansion: rank-deficient design matrix");
  ExpansionFit fit;
  fit.leading_power = leading_power;
  fit.coeffs = qr.solve(y);
  fit.rms_residual = std::sqrt((x * fit.coeffs - y).squaredNorm() / y.size());
  fit.ks.reserve(samples.size());
  for (double k : ks) fit.ks.push_back(static_cast<int>(std::lround(k)));
  return fit;
}

Eigen::MatrixXd expansion_weights(const std::vector<int>& ks, int leading_power,
                                  int order) {
  if (static_cast<int>(ks.size()) < order + 2)
    throw std::invalid_argument("expansion_weights: need at least order + 2 samples");
  std::vector<double> kd(ks.begin(), ks.end());
  const Eigen::MatrixXd x = design_matrix(kd, leading_power, order);
  return x.completeOrthogonalDecomposition().pseudoInverse();
}

double log_log_slope(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, y] : samples)
    if (std::abs(y) > 0.0) pts.emplace_back(std::log(k), std::log(std::abs(y)));
  if (pts.size() < 2)
    throw std::invalid_argument("log_log_slope: need at least two nonzero samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

KernelCoefficients verify_kernel_coefficients(const ScalarField& f,
                                              const Potential& phi0,
                                              const std::vector<int>& ks,
                                              const QuadratureGrid& grid) {
  const std::size_t m = grid.nodes.size();
  const std::size_t nk = ks.size();
  std::vector<std::vector<double>> kf(nk), kff(nk);
  for (std::size_t j = 0; j < nk; ++j) {
    const QuantizedFrame frame = make_frame(phi0, ks[j], grid);
    auto diag = kernel_diagonals(f, f, frame, grid);
    kf[j] = std::move(diag.first);
    kff[j] = std::move(diag.second);
  }

  // Both kernels carry one factor of rho_k: leading power k^1 (n = 1).
  const Eigen::MatrixXd w1 = expansion_weights(ks, 1, 2);
  const Eigen::MatrixXd w2 = expansion_weights(ks, 1, 2);

  KernelCoefficients out;
  out.ks = ks;
  out.kf_c0.resize(m);
  out.kf_c1.resize(m);
  out.kff_c0.resize(m);
  out.kff_c1.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double c0 = 0, c1 = 0, d0 = 0, d1 = 0;
    for (std::size_t j = 0; j < nk; ++j) {
      c0 += w1(0, static_cast<int>(j)) * kf[j][i];
      c1 += w1(1, static_cast<int>(j)) * kf[j][i];
      d0 += w2(0, static_cast<int>(j)) * kff[j][i];
      d1 += w2(1, static_cast<int>(j)) * kff[j][i];
    }
    out.kf_c0[i] = c0;
    out.kf_c1[i] = c1;
    out.kff_c0[i] = d0;
    out.kff_c1[i] = d1;
  }

  const std::vector<double> scal = scalar_curvature(phi0, grid);
  const std::vector<double> lap = laplacian(f, phi0, grid);
  const std::vector<Complex> gp = grad_pair(f, f, phi0, grid);
  out.f_values.resize(m);
  out.f_squared.resize(m);
  out.kf_b1.resize(m);
  out.kff_b1_half.resize(m);
  out.kff_b1_full.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double fv = f.value(grid.nodes[i].p);
    const double df2 = gp[i].real();
    out.f_values[i] = fv;
    out.f_squared[i] = fv * fv;
    out.kf_b1[i] = 0.5 * scal[i] * fv + lap[i];
    const double common = 0.5 * scal[i] * fv * fv + 2.0 * fv * lap[i];
    out.kff_b1_half[i] = common + 0.5 * df2;
    out.kff_b1_full[i] = common + df2;
  }
  return out;
}

ATerms a_terms(const ScalarField& f, const Potential& phi0, int k,
               const QuadratureGrid& grid) {
  const QuantizedFrame frame = make_frame(phi0, k, grid);
  const Eigen::MatrixXcd q = q_matrix(f, frame, phi0, grid);
  const CanonicalMeasure mu = canonical_measure(fs(frame.H, k), grid);
  const std::size_t m = grid.nodes.size();
  std::vector<double> t_qq(m), t_h2(m), t_h(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXcd& z = frame.zeta[i];
    const double h = hamiltonian(q, z);
    t_qq[i] = mu.density[i] * trace_abm(q, q, z).real();
    t_h2[i] = mu.density[i] * h * h;
    t_h[i] = mu.density[i] * h;
  }
  const double kk = static_cast<double>(k);
  ATerms a;
  a.k = k;
  a.a1 = integrate(grid, t_qq) / kk;
  a.a2 = -(1.0 + 1.0 / kk) * integrate(grid, t_h2) / kk;
  const double mh = integrate(grid, t_h);
  a.a3 = mh * mh / (kk * kk);
  return a;
}

HExpansionReport verify_h_expansion(const ScalarField& f, const Potential& phi0,
                                    const std::vector<int>& ks,
                                    const QuadratureGrid& grid) {
  const std::size_t m = grid.nodes.size();
  const std::size_t nk = ks.size();
  const double base_mass = canonical_measure(phi0, grid).mass;
  std::vector<std::vector<double>> h(nk);
  HExpansionReport out;
  out.ks = ks;
  out.mass_defect.resize(nk);
  for (std::size_t j = 0; j < nk; ++j) {
    const QuantizedFrame frame = make_frame(phi0, ks[j], grid);
    const Eigen::MatrixXcd q = q_matrix(f, frame, phi0, grid);
    h[j].resize(m);
    for (std::size_t i = 0; i < m; ++i) h[j][i] = hamiltonian(q, frame.zeta[i]);
    const double mass = canonical_measure(fs(frame.H, ks[j]), grid).mass;
    out.mass_defect[j] = mass / base_mass - 1.0;
  }

  const Eigen::MatrixXd w1 = expansion_weights(ks, 1, 2);
  out.h_c0.resize(m);
  out.h_c1.resize(m);
  out.f_values.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double c0 = 0, c1 = 0;
    for (std::size_t j = 0; j < nk; ++j) {
      c0 += w1(0, static_cast<int>(j)) * h[j][i];
      c1 += w1(1, static_cast<int>(j)) * h[j][i];
    }
    out.h_c0[i] = c0;
    out.h_c1[i] = c1;
    out.f_values[i] = f.value(grid.nodes[i].p);
  }

  std::vector<std::pair<double, double>> defect_samples;
  for (std::size_t j = 0; j < nk; ++j)
    defect_samples.emplace_back(static_cast<double>(ks[j]), out.mass_defect[j]);
  out.mass_defect_slope = log_log_slope(defect_samples);
  return out;
}

ConvergenceReport hessian_convergence(const ScalarField& f, const Potential& phi0,
                                      const std::vector<int>& ks,
                                      const QuadratureGrid& grid) {
  ConvergenceReport out;
  out.limit = ding_hessian(f, f, phi0, grid);
  std::vector<std::pair<double, double>> err_samples;
  for (int k : ks) {
    const QuantizedFrame frame = make_frame(phi0, k, grid);
    const Eigen::MatrixXcd q = q_matrix(f, frame, phi0, grid);
    ConvergenceRow row;
    row.k = k;
    row.quantized = q_ding_hessian(q, q, frame.H, k, grid);
    row.limit = out.limit;
    row.error = std::abs(row.quantized - out.limit);
    err_samples.emplace_back(static_cast<double>(k), row.error);
    out.rows.push_back(row);
  }
  // Rate from the asymptotic tail: the last three levels.
  if (err_samples.size() > 3)
    err_samples.erase(err_samples.begin(), err_samples.end() - 3);
  out.slope = log_log_slope(err_samples);
  return out;
}

}  // namespace dinglab
