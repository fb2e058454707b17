#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dinglab/errors.hpp"
#include "dinglab/expr.hpp"
#include "dinglab/functionals.hpp"
#include "dinglab/geometry.hpp"
#include "test_util.hpp"

using namespace dinglab;
using namespace dinglab::testutil;

namespace {

double integral_of(const SmoothFunction& f, const QuadratureGrid& grid) {
  std::vector<double> t(grid.nodes.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = f.value(grid.nodes[i].p);
  return integrate(grid, t);
}

}  // namespace

TEST_CASE("expression parser") {
  const ChartPoint pole{Chart::North, {0.0, 0.0}};

  SUBCASE("x3 is the height function") {
    const SmoothFunction f = parse_expr("x3");
    CHECK(f.value(pole) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.value({0.5, 0.1, std::sqrt(1 - 0.26)}) ==
          doctest::Approx(std::sqrt(1 - 0.26)).epsilon(1e-15));
  }

  SUBCASE("x3^2 jet at the north pole") {
    const Jet11 j = PolyField(parse_expr("x3^2")).jet11(pole);
    CHECK(j.v.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(j.d_w) < 1e-15);
  }

  SUBCASE("arithmetic matches direct evaluation") {
    const SmoothFunction f = parse_expr("(x1 + 2*x2)^2 - 0.5*x3*x1 + 3");
    const std::array<double, 3> x{0.3, -0.4, std::sqrt(0.75)};
    const double direct =
        (x[0] + 2 * x[1]) * (x[0] + 2 * x[1]) - 0.5 * x[2] * x[0] + 3.0;
    CHECK(f.value(x) == doctest::Approx(direct).epsilon(1e-14));
  }

  SUBCASE("syntax error carries the byte offset") {
    CHECK_THROWS_AS(parse_expr("x1 + 2*"), ParseError);
    try {
      parse_expr("x1 + 2*");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 7);
    }
  }

  SUBCASE("degree guard") {
    CHECK_THROWS_AS(parse_expr("x1^17"), ParseError);
    CHECK_NOTHROW(parse_expr("x1^16"));
  }
}

TEST_CASE("quadrature grid") {
  const QuadratureGrid& grid = default_grid();
  CHECK(grid.nodes.size() == 64u * 128u);
  double sum = 0.0;
  for (const auto& n : grid.nodes) {
    CHECK(n.weight > 0.0);
    sum += n.weight;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-14);

  CHECK(std::abs(integral_of(SmoothFunction::constant(1.0), grid) - 1.0) <= 1e-14);
  CHECK(std::abs(integral_of(x3(), grid)) <= 1e-14);
  CHECK(integral_of(x3() * x3(), grid) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(integral_of(x1() * x2(), grid)) <= 1e-14);

  CHECK_THROWS(make_grid(1, 48));
  CHECK_THROWS(make_grid(8, 3));
}

TEST_CASE("jets of coordinate functions") {
  const ChartPoint pole{Chart::North, {0.0, 0.0}};
  const Jet11 j3 = PolyField(x3()).jet11(pole);
  CHECK(j3.v.real() == doctest::Approx(1.0));
  CHECK(std::abs(j3.d_w) < 1e-15);
  CHECK(j3.d_wwbar.real() == doctest::Approx(-2.0).epsilon(1e-14));

  const Jet11 jc = PolyField(SmoothFunction::constant(1.0))
                       .jet11({Chart::South, {0.3, -0.2}});
  CHECK(jc.v.real() == doctest::Approx(1.0));
  CHECK(std::abs(jc.d_w) < 1e-16);
  CHECK(std::abs(jc.d_wwbar) < 1e-16);

  const Jet11 je = PolyField(x3()).jet11({Chart::North, {0.6, 0.8}});
  CHECK(std::abs(je.v) <= 1e-15);  // equator

  SUBCASE("real functions have conjugate-symmetric jets") {
    std::mt19937_64 rng(7);
    const Jet11 j = PolyField(random_poly(rng)).jet11({Chart::North, {0.4, -0.7}});
    CHECK(std::abs(j.v.imag()) < 1e-14);
    CHECK(std::abs(j.d_wbar - std::conj(j.d_w)) < 1e-14);
    CHECK(std::abs(j.d_wwbar.imag()) < 1e-14);
  }
}

TEST_CASE("Monge-Ampere measure") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const PolynomialPotential pert = perturbed_potential();

  const auto total = [&](const Potential& phi) {
    return integrate(grid, ma_density(phi, grid));
  };
  CHECK(total(round) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(total(pert) == doctest::Approx(2.0).epsilon(1e-12));

  const std::vector<double> ma = ma_density(round, grid);
  std::vector<double> t(grid.nodes.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.nodes[i].x * ma[i];
  CHECK(std::abs(integrate(grid, t)) <= 1e-13);

  SUBCASE("degenerate metric is an error, not a clamp") {
    const PolynomialPotential bad(3.0 * (x3() * x3()));
    CHECK_THROWS_AS(ma_density(bad, grid), DegenerateMetricError);
  }
}

TEST_CASE("canonical measure") {
  const QuadratureGrid& grid = medium_grid();
  const CanonicalMeasure mu = canonical_measure(round_potential(), grid);
  CHECK(mu.mass == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));

  std::vector<double> tx(grid.nodes.size()), txx(grid.nodes.size());
  for (std::size_t i = 0; i < tx.size(); ++i) {
    tx[i] = grid.nodes[i].x * mu.density[i];
    txx[i] = grid.nodes[i].x * grid.nodes[i].x * mu.density[i];
  }
  CHECK(std::abs(integrate(grid, tx)) <= 1e-13);
  CHECK(integrate(grid, txx) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(integrate(grid, mu.density) - 1.0) <= 1e-13);
}

TEST_CASE("Laplacian") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const PolyField fx(x3());

  const std::vector<double> lap = laplacian(fx, round, grid);
  for (std::size_t i = 0; i < lap.size(); i += 97)
    CHECK(lap[i] == doctest::Approx(-grid.nodes[i].x).epsilon(1e-12));

  const std::vector<double> lap1 =
      laplacian(PolyField(SmoothFunction::constant(2.0)), round, grid);
  for (std::size_t i = 0; i < lap1.size(); i += 53) CHECK(std::abs(lap1[i]) < 1e-14);

  const std::vector<double> ma = ma_density(round, grid);
  const std::vector<double> lap2 = laplacian(PolyField(x3() * x3()), round, grid);
  CHECK(std::abs(integrate_product(grid, lap2, ma)) <= 1e-12);
}

TEST_CASE("gradient pairing and integration by parts") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const PolyField fx(x3());

  const std::vector<Complex> gp = grad_pair(fx, fx, round, grid);
  for (std::size_t i = 0; i < gp.size(); i += 89) {
    const double x = grid.nodes[i].x;
    CHECK(gp[i].real() == doctest::Approx(0.5 * (1.0 - x * x)).epsilon(1e-12));
    CHECK(std::abs(gp[i].imag()) < 1e-13);
  }

  const CanonicalMeasure mu = canonical_measure(round, grid);
  std::vector<double> t(gp.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = gp[i].real() * mu.density[i];
  CHECK(integrate(grid, t) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  SUBCASE("IBP identity for random pairs at two potentials") {
    std::mt19937_64 rng(11);
    const PolynomialPotential pert = perturbed_potential();
    for (const Potential* phi :
         {static_cast<const Potential*>(&round), static_cast<const Potential*>(&pert)}) {
      const std::vector<double> ma = ma_density(*phi, grid);
      for (int trial = 0; trial < 10; ++trial) {
        const PolyField f(random_poly(rng));
        const PolyField g(random_poly(rng));
        const std::vector<Complex> fg = grad_pair(f, g, *phi, grid);
        const std::vector<double> lg = laplacian(g, *phi, grid);
        std::vector<double> a(fg.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double fv = f.value(grid.nodes[i].p);
          a[i] = (fg[i].real() + fv * lg[i]) * ma[i];
        }
        CHECK(std::abs(integrate(grid, a)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("Ricci potential") {
  const QuadratureGrid& grid = medium_grid();
  const std::vector<double> h = ricci_potential(round_potential(), grid);
  for (double v : h) CHECK(std::abs(v + std::log(2.0)) <= 1e-12);

  const PolynomialPotential pert = perturbed_potential();
  for (const Potential* phi : {static_cast<const Potential*>(&pert)}) {
    const std::vector<double> hp = ricci_potential(*phi, grid);
    const std::vector<double> ma = ma_density(*phi, grid);
    std::vector<double> t(hp.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::exp(hp[i]) * ma[i];
    CHECK(integrate(grid, t) == doctest::Approx(1.0).epsilon(1e-12));
    const auto [lo, hi] = std::minmax_element(hp.begin(), hp.end());
    CHECK(*hi - *lo > 0.01);
  }
}

TEST_CASE("scalar curvature") {
  const QuadratureGrid& grid = medium_grid();
  const std::vector<double> s = scalar_curvature(round_potential(), grid);
  for (double v : s) CHECK(std::abs(v - 1.0) <= 1e-11);

  const PolynomialPotential pert = perturbed_potential();
  const std::vector<double> sp = scalar_curvature(pert, grid);
  const std::vector<double> ma = ma_density(pert, grid);
  CHECK(0.5 * integrate_product(grid, sp, ma) == doctest::Approx(1.0).epsilon(1e-10));

  // Poles respond differently to the x3-odd perturbation.
  const auto near_pole = [&](double sign) {
    double best = 2.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
      if (std::abs(grid.nodes[i].x - sign) < best) {
        best = std::abs(grid.nodes[i].x - sign);
        arg = i;
      }
    return sp[arg];
  };
  CHECK(std::abs(near_pole(1.0) - near_pole(-1.0)) > 0.01);
}

TEST_CASE("chart consistency at overlap points") {
  const PolynomialPotential pert = perturbed_potential();
  const PolyField f(x3() * x3() + 0.5 * x1());
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(0.85, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double r = radius(rng), th = angle(rng);
    const ChartPoint p{Chart::North, Complex{r * std::cos(th), r * std::sin(th)}};
    const ChartPoint q = swapped(p);

    const auto density = [&](const ChartPoint& c) {
      return metric_density(pert, c) * (1.0 + std::norm(c.w)) * (1.0 + std::norm(c.w));
    };
    CHECK(density(p) == doctest::Approx(density(q)).epsilon(1e-10));

    const auto lap_at = [&](const ChartPoint& c) {
      return f.jet11(c).d_wwbar.real() / metric_density(pert, c);
    };
    CHECK(lap_at(p) == doctest::Approx(lap_at(q)).epsilon(1e-10));

    const auto u_at = [&](const ChartPoint& c) { return pert.u_value(c); };
    CHECK(u_at(p) == doctest::Approx(u_at(q)).epsilon(1e-10));
  }
}

TEST_CASE("quadrature refinement stability") {
  const PolynomialPotential pert = perturbed_potential();
  const QuadratureGrid fine = make_grid(48, 96);
  const double a = lfunc(pert, medium_grid());
  const double b = lfunc(pert, fine);
  CHECK(std::abs(a - b) <= 1e-10);
}

TEST_CASE("Poincare equality cases") {
  const QuadratureGrid& grid = medium_grid();
  const PolynomialPotential round = round_potential();
  const CanonicalMeasure mu = canonical_measure(round, grid);
  for (int axis = 0; axis < 3; ++axis) {
    const PolyField f(SmoothFunction::coordinate(axis));
    const std::vector<Complex> gp = grad_pair(f, f, round, grid);
    std::vector<double> tg(gp.size()), tf2(gp.size()), tf(gp.size());
    for (std::size_t i = 0; i < gp.size(); ++i) {
      const double fv = f.value(grid.nodes[i].p);
      tg[i] = gp[i].real() * mu.density[i];
      tf2[i] = fv * fv * mu.density[i];
      tf[i] = fv * mu.density[i];
    }
    const double m = integrate(grid, tf);
    CHECK(std::abs(integrate(grid, tg) - integrate(grid, tf2) + m * m) <= 1e-10);
  }
}
