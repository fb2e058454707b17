#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "dinglab/asymptotics.hpp"
#include "dinglab/errors.hpp"
#include "dinglab/hessians.hpp"
#include "test_util.hpp"

using namespace dinglab;
using namespace dinglab::testutil;

TEST_CASE("expansion fitting") {
  SUBCASE("exact linear data") {
    std::vector<std::pair<double, double>> s;
    for (double k : {2.0, 4.0, 8.0, 16.0}) s.emplace_back(k, 3.0 * k + 7.0);
    const ExpansionFit fit = fit_expansion(s, 1, 2);
    CHECK(fit.coeffs[0] == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(fit.coeffs[1] == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(std::abs(fit.coeffs[2]) <= 1e-8);
    CHECK(fit.rms_residual <= 1e-11);
  }

  SUBCASE("exact Laurent data") {
    std::vector<std::pair<double, double>> s;
    for (double k : {3.0, 5.0, 9.0, 17.0, 33.0})
      s.emplace_back(k, 2.0 * k + 5.0 + 11.0 / k);
    const ExpansionFit fit = fit_expansion(s, 1, 2);
    CHECK(fit.coeffs[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(fit.coeffs[1] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(fit.coeffs[2] == doctest::Approx(11.0).epsilon(1e-8));
  }

  SUBCASE("degenerate designs are rejected") {
    std::vector<std::pair<double, double>> s{{4.0, 1.0}, {4.0, 1.0},
                                             {4.0, 1.0}, {4.0, 1.0}};
    CHECK_THROWS_AS(fit_expansion(s, 1, 2), NumericalError);
    std::vector<std::pair<double, double>> tiny{{2.0, 1.0}, {4.0, 2.0}};
    CHECK_THROWS_AS(fit_expansion(tiny, 1, 2), std::invalid_argument);
  }

  SUBCASE("expansion_weights reproduces coefficients nodewise") {
    const std::vector<int> ks{2, 3, 5, 8, 13};
    const Eigen::MatrixXd w = expansion_weights(ks, 0, 2);
    double c0 = 0, c1 = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double y = 4.0 - 1.5 / ks[j] + 0.25 / (ks[j] * ks[j]);
      c0 += w(0, static_cast<int>(j)) * y;
      c1 += w(1, static_cast<int>(j)) * y;
    }
    CHECK(c0 == doctest::Approx(4.0).epsilon(1e-11));
    CHECK(c1 == doctest::Approx(-1.5).epsilon(1e-9));
  }
}

TEST_CASE("log-log slope") {
  std::vector<std::pair<double, double>> s;
  for (double k : {4.0, 8.0, 16.0, 32.0}) s.emplace_back(k, 5.0 / (k * k));
  CHECK(log_log_slope(s) == doctest::Approx(-2.0).epsilon(1e-12));

  s.emplace_back(64.0, 0.0);  // exact zeros are skipped
  CHECK(log_log_slope(s) == doctest::Approx(-2.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> zeros{{2.0, 0.0}, {4.0, 0.0}};
  CHECK_THROWS_AS(log_log_slope(zeros), std::invalid_argument);
}

TEST_CASE("A-terms") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();

  SUBCASE("constant direction is exact") {
    for (int k : {2, 5}) {
      const ATerms a =
          a_terms(PolyField(SmoothFunction::constant(1.0)), round, k, grid);
      CHECK(a.a1 == doctest::Approx(static_cast<double>(k)).epsilon(1e-11));
      CHECK(a.a2 == doctest::Approx(-static_cast<double>(k) - 1.0).epsilon(1e-11));
      CHECK(a.a3 == doctest::Approx(1.0).epsilon(1e-11));
    }
  }

  SUBCASE("sum equals the quantized Hessian") {
    const int k = 5;
    const PolynomialPotential pert = perturbed_potential();
    const PolyField f(x3());
    const ATerms a = a_terms(f, pert, k, grid);
    const QuantizedFrame frame = make_frame(pert, k, grid);
    const Eigen::MatrixXcd q = q_matrix(f, frame, pert, grid);
    CHECK(a.sum() ==
          doctest::Approx(q_ding_hessian(q, q, frame.H, k, grid)).epsilon(1e-10));
  }

  SUBCASE("Hessian is symmetric in the two quantized directions") {
    const int k = 4;
    const QuantizedFrame frame = make_frame(round, k, grid);
    const Eigen::MatrixXcd qf = q_matrix(PolyField(x3()), frame, round, grid);
    const Eigen::MatrixXcd qg =
        q_matrix(PolyField(x3() * x3()), frame, round, grid);
    CHECK(q_ding_hessian(qf, qg, frame.H, k, grid) ==
          doctest::Approx(q_ding_hessian(qg, qf, frame.H, k, grid)).epsilon(1e-11));
  }
}

TEST_CASE("Hamiltonian expansion") {
  const QuadratureGrid& grid = medium_grid();
  const std::vector<int> ks{4, 6, 8, 12, 16};

  SUBCASE("constant direction: c0 = 1, c1 = 0") {
    const HExpansionReport r = verify_h_expansion(
        PolyField(SmoothFunction::constant(1.0)), round_potential(), ks, grid);
    for (std::size_t i = 0; i < r.h_c0.size(); i += 77) {
      CHECK(r.h_c0[i] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(r.h_c1[i]) <= 1e-8);
    }
  }

  SUBCASE("leading term recovers f; mass defect decays like 1/k^2") {
    const HExpansionReport r =
        verify_h_expansion(PolyField(x3()), round_potential(), ks, grid);
    double max_err = 0.0;
    for (std::size_t i = 0; i < r.h_c0.size(); ++i)
      max_err = std::max(max_err, std::abs(r.h_c0[i] - r.f_values[i]));
    CHECK(max_err <= 1e-3);
    CHECK(r.mass_defect_slope <= -1.9);
  }
}

TEST_CASE("kernel coefficients on a reduced ladder") {
  const QuadratureGrid& grid = medium_grid();
  const std::vector<int> ks{4, 6, 8, 12, 16};
  const KernelCoefficients kc =
      verify_kernel_coefficients(PolyField(x3()), round_potential(), ks, grid);
  double e0 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < kc.kf_c0.size(); ++i) {
    e0 = std::max(e0, std::abs(kc.kf_c0[i] - kc.f_values[i]));
    e2 = std::max(e2, std::abs(kc.kff_c0[i] - kc.f_squared[i]));
  }
  CHECK(e0 <= 0.02);
  CHECK(e2 <= 0.05);
}

TEST_CASE("Hessian convergence") {
  // k = 32 needs the full grid: angular frequencies reach 2k = 64.
  const QuadratureGrid& grid = default_grid();
  const std::vector<int> ks{8, 16, 32};

  SUBCASE("x3^2 errors decay like 1/k") {
    const ConvergenceReport r =
        hessian_convergence(PolyField(x3() * x3()), round_potential(), ks, grid);
    CHECK(r.limit == doctest::Approx(8.0 / 45.0).epsilon(1e-10));
    for (std::size_t i = 1; i < r.rows.size(); ++i)
      CHECK(r.rows[i].error < r.rows[i - 1].error);
    CHECK(r.slope <= -0.7);
    CHECK(r.slope >= -1.5);
  }

  SUBCASE("kernel direction collapses to zero") {
    const ConvergenceReport r =
        hessian_convergence(PolyField(x3()), round_potential(), ks, grid);
    CHECK(std::abs(r.limit) <= 1e-10);
    for (const ConvergenceRow& row : r.rows) CHECK(row.error <= 1e-6);
  }
}
