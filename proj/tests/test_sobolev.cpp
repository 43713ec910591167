#include "brl/sobolev.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace brl;
using std::numbers::pi;

namespace {

Box unit_box() { return Box{Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0, 2.0)}; }

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(sphere_area(0) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2 * pi));
  CHECK(sphere_area(2) == doctest::Approx(4 * pi));
  CHECK(sphere_area(3) == doctest::Approx(2 * pi * pi));
}

TEST_CASE("Gauss-Jacobi rules") {
  const GaussRule g = gauss_jacobi(2, 0.0, 0.0);
  CHECK(g.nodes(0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(g.nodes(1) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(g.weights.sum() == doctest::Approx(2.0));
  // Chebyshev weight (1 - t^2)^{-1/2}: total mass pi, exact for t^4 (3 pi / 8)
  const GaussRule c = gauss_jacobi(5, -0.5, -0.5);
  CHECK(c.weights.sum() == doctest::Approx(pi));
  CHECK(c.weights.dot(c.nodes.array().pow(4).matrix()) == doctest::Approx(3 * pi / 8));
  CHECK_THROWS(gauss_jacobi(0, 0.0, 0.0));
  CHECK_THROWS(gauss_jacobi(3, -1.0, 0.0));
}

TEST_CASE("sphere rules integrate monomials exactly") {
  for (int n : {1, 2, 3}) {
    const SphereRule r = sphere_rule(n, 12);
    CHECK(r.nodes.rows() == n + 1);
    CHECK(r.weights.sum() == doctest::Approx(sphere_area(n)).epsilon(1e-13));
    CHECK(sphere_rule_self_test(r) <= 1e-12);
    CHECK((r.nodes.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-14);
  }
  CHECK(sphere_monomial_integral({2, 0, 0}) == doctest::Approx(4 * pi / 3));
  CHECK(sphere_monomial_integral({1, 2}) == 0.0);
}

TEST_CASE("seminorms of the coordinate function") {
  const BoxGrid g = make_grid(unit_box(), 16);
  const Symbol x1 = coordinate_window(0, unit_box());
  CHECK(sobolev_seminorm(x1, 2.0, g) == doctest::Approx(1.0));
  CHECK(sobolev_seminorm(x1, 3.0, g) == doctest::Approx(1.0));
  // k = 1, p = 2: (int_0^{2 pi} sin^4)^{1/2} = (3 pi / 4)^{1/2}
  const double d = directional_seminorm(x1, 1, 2.0, g, sphere_rule(1));
  CHECK(d == doctest::Approx(std::sqrt(3 * pi / 4)).epsilon(1e-13));
  CHECK(d == doctest::Approx(1.53499).epsilon(1e-5));
}

TEST_CASE("directional seminorm invariances") {
  const BoxGrid g = make_grid(Box{Eigen::Vector2d(-1.0, 0.5), Eigen::Vector2d(1.0, 2.5)}, 40);
  const Symbol f = gaussian_bump(Eigen::Vector2d(0.0, 1.5), 0.1);
  const SphereRule s = sphere_rule(1);
  const double a = directional_seminorm(f, 2, 3.0, g, s);
  CHECK(directional_seminorm(scaled(f, -2.0), 2, 3.0, g, s) == doctest::Approx(2 * a).epsilon(1e-12));
  CHECK(directional_seminorm(f, 1, 2.0, g, s) > 0.0);
  CHECK_THROWS(directional_seminorm(f, 3, 2.0, g, s));
  CHECK_THROWS(directional_seminorm(f, 1, 2.0, g, sphere_rule(2)));
  CHECK_THROWS(sobolev_seminorm(f, 1.0, g));
}

TEST_CASE("finite-difference gradients agree with analytic ones at 64 points per axis") {
  const Box box{Eigen::Vector2d(0.0, 0.5), Eigen::Vector2d(1.0, 1.5)};
  const BoxGrid g = make_grid(box, 64);
  const SphereRule s = sphere_rule(1);
  const Symbol smooth[] = {cosine_bump(Eigen::Vector2d(0.5, 1.0), Eigen::Vector2d::Constant(0.3)),
                           cosine_bump(Eigen::Vector2d(0.55, 0.95), Eigen::Vector2d(0.25, 0.35), 1.3),
                           gaussian_bump(Eigen::Vector2d(0.5, 1.0), 0.05)};
  for (const Symbol& f : smooth)
    for (int k : {1, 2}) {
      const double an = directional_seminorm(f, k, 2.0, g, s, GradientMode::analytic);
      const double fd = directional_seminorm(f, k, 2.0, g, s, GradientMode::finite_difference);
      CHECK(std::abs(fd - an) / an <= 1e-4);
    }
}

TEST_CASE("finite differences need clearance from the box edge") {
  const BoxGrid g = make_grid(unit_box(), 16);
  const Symbol near_edge = cosine_bump(Eigen::Vector2d(0.1, 1.5), Eigen::Vector2d::Constant(0.2));
  CHECK_THROWS_AS(grid_gradients(near_edge, g, GradientMode::finite_difference), std::domain_error);
  CHECK_NOTHROW(grid_gradients(near_edge, g, GradientMode::analytic));
}

TEST_CASE("equivalence probe") {
  const BoxGrid g = make_grid(Box{Eigen::Vector2d(-1.0, 0.5), Eigen::Vector2d(1.0, 2.5)}, 48);
  std::vector<Symbol> fs;
  for (double w : {0.1, 0.15, 0.2}) fs.push_back(gaussian_bump(Eigen::Vector2d(0.0, 1.5), w));
  fs.push_back(cosine_bump(Eigen::Vector2d(0.1, 1.4), Eigen::Vector2d(0.3, 0.6)));
  const EquivalenceProbe e = equivalence_probe(fs, 1, 2.0, g, sphere_rule(1));
  CHECK(e.ratios.size() == 4);
  CHECK(e.c1 > 0.0);
  CHECK(e.c1 <= e.c2);
  // isotropic bumps all give the same ratio
  CHECK(e.ratios[0] == doctest::Approx(e.ratios[2]).epsilon(1e-3));
}
