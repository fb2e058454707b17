#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dinglab/acceptance.hpp"
#include "dinglab/functionals.hpp"
#include "dinglab/hessians.hpp"
#include "dinglab/quantization.hpp"
#include "test_util.hpp"

using namespace dinglab;
using namespace dinglab::testutil;

TEST_CASE("Ding Hessian at the round metric") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();

  SUBCASE("kernel directions") {
    CHECK(std::abs(ding_hessian(PolyField(SmoothFunction::constant(1.0)),
                                PolyField(SmoothFunction::constant(1.0)), round,
                                grid)) <= 1e-12);
    for (int axis = 0; axis < 3; ++axis) {
      const PolyField f(SmoothFunction::coordinate(axis));
      CHECK(std::abs(ding_hessian(f, f, round, grid)) <= 1e-11);
    }
  }

  SUBCASE("x3^2 has the closed-form value 8/45") {
    const PolyField f(x3() * x3());
    CHECK(ding_hessian(f, f, round, grid) ==
          doctest::Approx(8.0 / 45.0).epsilon(1e-11));
  }

  SUBCASE("symmetry and bilinearity") {
    std::mt19937_64 rng(71);
    const PolyField f(random_poly(rng));
    const PolyField g(random_poly(rng));
    const PolyField h(random_poly(rng));
    const double fg = ding_hessian(f, g, round, grid);
    CHECK(ding_hessian(g, f, round, grid) == doctest::Approx(fg).epsilon(1e-12));
    const PolyField fg2(f.poly() + 2.0 * g.poly());
    CHECK(ding_hessian(fg2, h, round, grid) ==
          doctest::Approx(ding_hessian(f, h, round, grid) +
                          2.0 * ding_hessian(g, h, round, grid))
              .epsilon(1e-11));
  }
}

TEST_CASE("second derivative along affine paths") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const PolynomialPotential pert = perturbed_potential();

  SUBCASE("matches the Hessian at the Kaehler-Einstein point") {
    const PolyField f(x3() * x3() + 0.3 * x1());
    CHECK(ding_second_derivative_along_path(f, round, grid) ==
          doctest::Approx(ding_hessian(f, f, round, grid)).epsilon(1e-12));
  }

  SUBCASE("constant directions are flat") {
    CHECK(std::abs(ding_second_derivative_along_path(
              PolyField(SmoothFunction::constant(1.0)), pert, grid)) <= 1e-12);
  }

  SUBCASE("finite-difference oracle at a perturbed potential") {
    const PolyField f(x3() * x3());
    const double fd = fd_second_derivative([&](double t) {
      return ding(PolynomialPotential(pert.u() + t * f.poly()), round_potential(),
                  grid);
    });
    CHECK(ding_second_derivative_along_path(f, pert, grid) ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("quantized Ding Hessian") {
  const QuadratureGrid& grid = medium_grid();
  const int k = 4;
  const HermitianForm h0 = hilb(round_potential(), k, grid);
  const int n = h0.dim();
  std::mt19937_64 rng(81);

  SUBCASE("identity and torus directions are flat") {
    CHECK(std::abs(q_ding_hessian(Eigen::MatrixXcd::Identity(n, n),
                                  Eigen::MatrixXcd::Identity(n, n), h0, k, grid)) <=
          1e-12);
    for (const Eigen::MatrixXcd& a : automorphism_directions(h0, k)) {
      const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
      CHECK(std::abs(q_ding_hessian(h, h, h0, k, grid)) <= 1e-9);
    }
  }

  SUBCASE("positive semidefinite and symmetric") {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd a = random_hermitian(rng, n);
      const Eigen::MatrixXcd b = random_hermitian(rng, n);
      CHECK(q_ding_hessian(a, a, h0, k, grid) >= -1e-9);
      CHECK(q_ding_hessian(a, b, h0, k, grid) ==
            doctest::Approx(q_ding_hessian(b, a, h0, k, grid)).epsilon(1e-10));
    }
  }

  SUBCASE("three independent routes agree") {
    const HermitianForm hp = hilb(perturbed_potential(), k, grid);
    for (int trial = 0; trial < 3; ++trial) {
      const Eigen::MatrixXcd a = random_hermitian(rng, hp.dim());
      const HessianReport r = hessian_report(a, hp, k, grid);
      CHECK(r.max_residual() <= 1e-6 * (1.0 + std::abs(r.formula)));
    }
  }

  SUBCASE("insensitive to scaling the base form") {
    const Eigen::MatrixXcd a = random_hermitian(rng, n);
    const HermitianForm h0c(4.0 * h0.gram());
    CHECK(q_ding_hessian(a, a, h0c, k, grid) ==
          doctest::Approx(q_ding_hessian(a, a, h0, k, grid)).epsilon(1e-9));
  }
}

TEST_CASE("corollary decomposition") {
  const QuadratureGrid& grid = medium_grid();
  const int k = 4;
  const HermitianForm h0 = hilb(round_potential(), k, grid);
  std::mt19937_64 rng(91);

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd a = random_hermitian(rng, h0.dim());
    const CorollaryDecomposition d = corollary_decomposition(a, h0, k, grid);
    CHECK(d.total == doctest::Approx(d.base + d.normal).epsilon(1e-8));
    CHECK(d.normal >= -1e-12);
  }

  // Automorphism directions have no normal component.
  for (const Eigen::MatrixXcd& a : automorphism_directions(h0, k)) {
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    const CorollaryDecomposition d = corollary_decomposition(h, h0, k, grid);
    CHECK(std::abs(d.normal) <= 1e-10);
  }
}

TEST_CASE("Hermitian matrix basis") {
  const int n = 4;
  const std::vector<Eigen::MatrixXcd> basis = hermitian_basis(n);
  CHECK(basis.size() == static_cast<std::size_t>(n * n));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    CHECK((basis[a] - basis[a].adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double ip = (basis[a] * basis[b]).trace().real();
      CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("spectrum of the quantized Hessian") {
  const QuadratureGrid& grid = medium_grid();

  SUBCASE("k = 1 round: nine eigenvalues, four in the kernel") {
    const HermitianForm h0 = hilb(round_potential(), 1, grid);
    const Eigen::VectorXd ev = q_hessian_spectrum(h0, 1, grid);
    CHECK(ev.size() == 9);
    CHECK(ev.minCoeff() >= -1e-9);
    int tiny = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev[i] < 1e-8) ++tiny;
    CHECK(tiny == 4);
    CHECK(ev[4] > 1e-4);
  }

  SUBCASE("dimension guard") {
    const HermitianForm big(Eigen::MatrixXcd::Identity(101, 101));
    CHECK_THROWS_AS(q_hessian_spectrum(big, 50, grid), std::invalid_argument);
  }
}
