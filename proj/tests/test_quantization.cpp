#include <cmath>
#include <random>

#include "doctest.h"
#include "dinglab/errors.hpp"
#include "dinglab/functionals.hpp"
#include "dinglab/quantization.hpp"
#include "test_util.hpp"

using namespace dinglab;
using namespace dinglab::testutil;

namespace {

// Frozen oracle: round Gram diagonal at level k is 2 j!(2k-j)!/(2k+1)!.
double round_gram_diag(int k, int j) {
  double v = 2.0;
  for (int i = 1; i <= j; ++i) v *= static_cast<double>(i);
  for (int i = 1; i <= 2 * k - j; ++i) v *= static_cast<double>(i);
  for (int i = 1; i <= 2 * k + 1; ++i) v /= static_cast<double>(i);
  return v;
}

}  // namespace

TEST_CASE("hilb at the round potential") {
  const QuadratureGrid& grid = default_grid();
  const PolynomialPotential round = round_potential();

  SUBCASE("Gram is diagonal with the beta-integral entries") {
    for (int k : {1, 2, 4, 8}) {
      const HermitianForm h = hilb(round, k, grid);
      const Eigen::MatrixXcd& g = h.gram();
      for (int a = 0; a < h.dim(); ++a) {
        for (int b = 0; b < h.dim(); ++b) {
          if (a == b)
            CHECK(g(a, a).real() ==
                  doctest::Approx(round_gram_diag(k, a)).epsilon(1e-12));
          else
            CHECK(std::abs(g(a, b)) <= 1e-13);
        }
      }
    }
  }

  SUBCASE("index reversal symmetry (w -> 1/w)") {
    const HermitianForm h = hilb(round, 4, grid);
    const int n = h.dim();
    for (int a = 0; a < n; ++a)
      CHECK(h.gram()(a, a).real() ==
            doctest::Approx(h.gram()(n - 1 - a, n - 1 - a).real()).epsilon(1e-13));
  }
}

TEST_CASE("HermitianForm factorization") {
  SUBCASE("singular form throws") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(3, 3);
    g(1, 1) = 0.0;
    CHECK_THROWS_AS(HermitianForm(g).cholesky(), IndefiniteFormError);
  }

  SUBCASE("indefinite form throws") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(3, 3);
    g(2, 2) = -1.0;
    CHECK_THROWS_AS(HermitianForm(g).cholesky(), IndefiniteFormError);
  }

  SUBCASE("onb orthonormalizes a perturbed Gram") {
    const HermitianForm h = hilb(perturbed_potential(), 4, medium_grid());
    const Eigen::MatrixXcd& c = h.onb();
    const Eigen::MatrixXcd res =
        c.adjoint() * h.gram() * c - Eigen::MatrixXcd::Identity(h.dim(), h.dim());
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Fubini-Study pullback of a Hermitian form") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();

  SUBCASE("fs(hilb(round)) is round plus the exact constant") {
    for (int k : {2, 5}) {
      const FsPotential phi = fs(hilb(round, k, grid), k);
      const double shift =
          std::log((2.0 * k + 1.0) / (2.0 * k)) / static_cast<double>(k);
      for (std::size_t i = 0; i < grid.nodes.size(); i += 101) {
        const ChartPoint& p = grid.nodes[i].p;
        CHECK(phi.local_value(p) - round.local_value(p) ==
              doctest::Approx(shift).epsilon(1e-11));
      }
    }
  }

  SUBCASE("scaling the form shifts fs by -log(c)/k") {
    const int k = 3;
    const HermitianForm h = hilb(perturbed_potential(), k, grid);
    const HermitianForm hc(2.5 * h.gram());
    const FsPotential a = fs(h, k);
    const FsPotential b = fs(hc, k);
    const ChartPoint p{Chart::North, {0.4, -0.3}};
    CHECK(b.local_value(p) - a.local_value(p) ==
          doctest::Approx(-std::log(2.5) / k).epsilon(1e-12));
  }

  SUBCASE("fs is the sup over unit sections (attained at zeta)") {
    const int k = 3;
    const QuantizedFrame frame = make_frame(perturbed_potential(), k, grid);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < grid.nodes.size(); i += 211) {
      const Eigen::VectorXcd& z = frame.zeta[i];
      const double sup = z.squaredNorm();
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXcd c(frame.dim());
        for (int a = 0; a < frame.dim(); ++a)
          c[a] = Complex{gauss(rng), gauss(rng)};
        const double val = std::norm(z.dot(c)) / c.squaredNorm();
        CHECK(val <= sup * (1.0 + 1e-12));
      }
      CHECK(std::norm(z.dot(z)) / z.squaredNorm() ==
            doctest::Approx(sup).epsilon(1e-12));
    }
  }
}

TEST_CASE("Bergman function") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();

  SUBCASE("round rho is the constant (2k+1)/2") {
    for (int k : {1, 4, 8}) {
      const std::vector<double> rho = bergman_rho(round, k, grid);
      for (std::size_t i = 0; i < rho.size(); i += 97)
        CHECK(rho[i] == doctest::Approx((2.0 * k + 1.0) / 2.0).epsilon(1e-11));
    }
  }

  SUBCASE("positivity and trace identity at a perturbed potential") {
    const int k = 4;
    const QuantizedFrame frame = make_frame(perturbed_potential(), k, grid);
    std::vector<double> t(grid.nodes.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(frame.rho[i] > 0.0);
      t[i] = frame.rho[i] * frame.ma[i];
    }
    // int rho MA = dim H^0 = N, since the frame is orthonormal.
    CHECK(integrate(grid, t) ==
          doctest::Approx(static_cast<double>(frame.dim())).epsilon(1e-10));
  }

  SUBCASE("large k stays finite") {
    const std::vector<double> rho = bergman_rho(round, 32, default_grid());
    for (double v : rho) {
      CHECK(std::isfinite(v));
      CHECK(v == doctest::Approx(32.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("q_matrix") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const int k = 4;
  const QuantizedFrame frame = make_frame(round, k, grid);

  SUBCASE("direction 1 gives k times the identity") {
    const Eigen::MatrixXcd q =
        q_matrix(PolyField(SmoothFunction::constant(1.0)), frame, round, grid);
    const Eigen::MatrixXcd res =
        q - static_cast<double>(k) * Eigen::MatrixXcd::Identity(frame.dim(), frame.dim());
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("direction x3 is diagonal at the round form") {
    const Eigen::MatrixXcd q = q_matrix(PolyField(x3()), frame, round, grid);
    for (int a = 0; a < frame.dim(); ++a)
      for (int b = 0; b < frame.dim(); ++b)
        if (a != b) CHECK(std::abs(q(a, b)) <= 1e-11);
  }

  SUBCASE("finite-difference oracle on the Gram family") {
    const PolyField f(x3() * x3());
    const Eigen::MatrixXcd q = q_matrix(f, frame, round, grid);
    const double h = 1e-4;
    // hilb(phi - t f) differentiated at t = 0, pushed to the orthonormal frame.
    const PolynomialPotential plus(round.u() - h * f.poly());
    const PolynomialPotential minus(round.u() + h * f.poly());
    const Eigen::MatrixXcd fd = frame.C.adjoint() *
                                (hilb(plus, k, grid).gram() -
                                 hilb(minus, k, grid).gram()) *
                                frame.C / (2.0 * h);
    CHECK((q - fd).cwiseAbs().maxCoeff() <= 1e-6 * q.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Toeplitz operators and kernels") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const int k = 4;
  const QuantizedFrame frame = make_frame(round, k, grid);

  SUBCASE("T_1 is the identity") {
    const Eigen::MatrixXcd t =
        toeplitz(PolyField(SmoothFunction::constant(1.0)), frame, grid);
    const Eigen::MatrixXcd res =
        t - Eigen::MatrixXcd::Identity(frame.dim(), frame.dim());
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-11);
  }

  SUBCASE("trace identities") {
    const Eigen::MatrixXcd tx = toeplitz(PolyField(x3()), frame, grid);
    CHECK(std::abs(tx.trace()) <= 1e-11);

    const PolyField f(x3() * x3());
    const Eigen::MatrixXcd tf = toeplitz(f, frame, grid);
    std::vector<double> t(grid.nodes.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = f.value(grid.nodes[i].p) * frame.rho[i] * frame.ma[i];
    CHECK(tf.trace().real() == doctest::Approx(integrate(grid, t)).epsilon(1e-10));
  }

  SUBCASE("kernel diagonals integrate to the operator traces") {
    const PolyField f(x3() * x3());
    const PolyField g(x3());
    const auto [kf, kfg] = kernel_diagonals(f, g, frame, grid);

    std::vector<double> one(grid.nodes.size(), 1.0);
    for (std::size_t i = 0; i < kf.size(); ++i) one[i] = kf[i] * frame.ma[i];
    const Eigen::MatrixXcd tf = toeplitz(f, frame, grid);
    CHECK(integrate(grid, one) == doctest::Approx(tf.trace().real()).epsilon(1e-10));

    for (std::size_t i = 0; i < kfg.size(); ++i) one[i] = kfg[i] * frame.ma[i];
    const Eigen::MatrixXcd tg = toeplitz(g, frame, grid);
    CHECK(integrate(grid, one) ==
          doctest::Approx((tf * tg).trace().real()).epsilon(1e-10));
  }

  SUBCASE("K_1 and K_{1,1} are the Bergman function") {
    const PolyField one(SmoothFunction::constant(1.0));
    const auto [k1, k11] = kernel_diagonals(one, one, frame, grid);
    for (std::size_t i = 0; i < k1.size(); i += 111) {
      CHECK(k1[i] == doctest::Approx(frame.rho[i]).epsilon(1e-11));
      CHECK(k11[i] == doctest::Approx(frame.rho[i]).epsilon(1e-11));
    }
  }
}
