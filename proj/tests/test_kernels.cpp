#include "brl/kernels.hpp"
#include "brl/quadrature.hpp"
#include "brl/spectral_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace brl;
using namespace brl::kern;

namespace {

Point pt(double a, double b) {
  Point x(2);
  x << a, b;
  return x;
}

Point pt(double a, double b, double c) {
  Point x(3);
  x << a, b, c;
  return x;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("kernel symbols") {
  const Point x = pt(0.0, 1.0), y = pt(3.0, 4.0);
  CHECK(H(x, y) == doctest::Approx(std::sqrt(18.0) / 2.0));
  CHECK(a(x, y) == doctest::Approx(0.5));
  CHECK(a(y, x) == doctest::Approx(0.5));
  CHECK(b(x, y) == 1.0);
  CHECK(b(y, x) == 0.0);
  CHECK(h(0, x, y) == doctest::Approx(-3.0 / std::sqrt(18.0)));
  CHECK(K(1, 1.0, x, y) == doctest::Approx(-3.0 / (std::pow(18.0, 1.5) * 4.0)));
  CHECK(Q(0.5, x, y) == doctest::Approx(18.0 + 4.0));
  CHECK_THROWS_AS(h(0, x, x), std::domain_error);
  CHECK_THROWS_AS(K(0, 1.0, x, x), std::domain_error);
}

TEST_CASE("heat semigroup preserves constants") {
  for (double lam : {0.5, 1.0, 2.0}) {
    const ModelParams p{1, lam, 1};
    const Point x = pt(0.2, 0.8);
    const double s = 0.3;
    auto row = [&](double y2) {
      return quad::gauss_kronrod([&](double y1) { return heat_kernel(p, s, x, pt(y1, y2)); }, -3.0, 3.0, 1e-11).value *
             std::pow(y2, 2 * lam);
    };
    const double mass = quad::gauss_kronrod(row, 1e-9, 4.0, 1e-10).value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("tabulated heat kernel") {
  const ModelParams p{2, 1.5, 1};
  const HeatKernel t(p, 0.4, 50.0);
  for (const Point& y : {pt(0.0, 0.0, 1.0), pt(0.3, -0.2, 2.0), pt(1.0, 1.0, 0.1)}) {
    const Point x = pt(0.1, 0.1, 1.2);
    CHECK(t(x, y) == doctest::Approx(heat_kernel(p, 0.4, x, y)).epsilon(1e-11));
  }
}

TEST_CASE("Delta^{-1/2}: closed form and subordination agree") {
  for (int n : {1, 2})
    for (double lam : {0.5, 1.5}) {
      const ModelParams p{n, lam, 1};
      const Point x = n == 1 ? pt(0.0, 1.0) : pt(0.0, 0.3, 1.0);
      const Point y = n == 1 ? pt(0.7, 0.4) : pt(0.5, -0.2, 1.6);
      CHECK(rel(invsqrt_kernel_closed(p, x, y), invsqrt_kernel_subordination(p, x, y)) <= 1e-8);
      CHECK(invsqrt_kernel_closed(p, x, y) == doctest::Approx(invsqrt_kernel_closed(p, y, x)).epsilon(1e-14));
    }
}

TEST_CASE("Bessel-Riesz kernel is the x_k derivative of the Delta^{-1/2} kernel") {
  for (int n : {1, 2})
    for (int k = 1; k <= n + 1; ++k) {
      const ModelParams p{n, 1.0, k};
      const Point x = n == 1 ? pt(0.1, 1.0) : pt(0.1, 0.2, 1.0);
      const Point y = n == 1 ? pt(0.9, 0.6) : pt(-0.5, 0.4, 1.7);
      const double step = 1e-5;
      Point xp = x, xm = x;
      xp(k - 1) += step;
      xm(k - 1) -= step;
      const double fd = (invsqrt_kernel_closed(p, xp, y) - invsqrt_kernel_closed(p, xm, y)) / (2 * step);
      CHECK(rel(riesz_kernel_bessel(p, x, y), fd) <= 1e-5);
    }
}

TEST_CASE("tangential Bessel-Riesz kernels are antisymmetric") {
  const ModelParams p{2, 1.5, 2};
  const Point x = pt(0.0, 0.3, 1.0), y = pt(0.4, -0.1, 0.5);
  CHECK(riesz_kernel_bessel(p, x, y) == doctest::Approx(-riesz_kernel_bessel(p, y, x)).epsilon(1e-12));
}

TEST_CASE("tabulated F gives the same Riesz kernel") {
  const ModelParams p{1, 1.0, 2};
  const aux::AuxTable t(p, 10.0);
  const BesselRieszKernel fast(p, &t), slow(p);
  for (const Point& y : {pt(0.3, 0.6), pt(-1.0, 2.0), pt(0.01, 1.0)}) {
    const Point x = pt(0.0, 1.0);
    CHECK(rel(fast(x, y), slow(x, y)) <= 1e-11);
  }
}

TEST_CASE("classical Riesz kernel") {
  const Point x = pt(0.0, 1.0), y = pt(1.0, 2.0);
  const double omega = model_constants({1, 1.0, 1}).omega_n;
  CHECK(riesz_kernel_classical(0, x, y) == doctest::Approx(omega / std::pow(2.0, 1.5)));
  CHECK(riesz_kernel_classical(1, x, y) == doctest::Approx(-riesz_kernel_classical(1, y, x)));
}

TEST_CASE("commutator kernel vanishes for constant symbols") {
  const Symbol one = constant_symbol(2.0, Box{pt(-5, 0.1), pt(5, 5)});
  const ModelParams p{1, 1.0, 1};
  const KernelFn base = [&](PointRef x, PointRef y) { return riesz_kernel_bessel(p, x, y); };
  CHECK(commutator_kernel(base, one, pt(0.0, 1.0), pt(1.0, 1.0)) == 0.0);
}

TEST_CASE("Schur-multiplier form in three dimensions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), v(0.3, 2.0);
  const Symbol f = gaussian_bump(pt(0.1, -0.2, 1.0), 0.5);
  for (int k : {1, 3}) {
    const ModelParams p{2, 1.5, k};
    for (int i = 0; i < 50; ++i) {
      const Point x = pt(u(rng), u(rng), v(rng)), y = pt(u(rng), u(rng), v(rng));
      const double lhs = riesz_kernel_bessel(p, x, y) * (f(y) - f(x));
      CHECK(rel(lhs, prop35_rhs_kernel(p, f, x, y)) <= 1e-10);
    }
  }
}

TEST_CASE("ratio bound sampler") {
  for (int n : {1, 2, 3}) {
    const RatioBoundReport r = ratio_bound_check(n, 5000, 11);
    CHECK(r.accepted == 5000);
    CHECK(r.violations == 0);
    CHECK(r.passed);
    CHECK(r.min_ratio >= (3.0 - std::sqrt(5.0)) / 2.0);
    CHECK(r.max_ratio <= (3.0 + std::sqrt(5.0)) / 2.0);
  }
}

TEST_CASE("local behaviour matches the classical commutator") {
  const Symbol f = gaussian_bump(pt(0.0, 1.0), 0.4);
  const TaylorReport r = taylor_local_check({1, 1.0, 2}, f, Box{pt(-0.3, 0.8), pt(0.3, 1.2)});
  CHECK(r.passed);
  CHECK(r.leading_ratios.back() == doctest::Approx(r.expected_ratio).epsilon(1e-2));
}

TEST_CASE("spectral kernel reproduces the heat kernel") {
  const double s = 0.5;
  const RadialProfile g = [s](double r) { return std::exp(-s * s * r * r); };
  for (int n : {1, 2}) {
    const ModelParams p{n, 1.0, 1};
    const Point x = n == 1 ? pt(0.0, 1.0) : pt(0.0, 0.0, 1.0);
    const Point y = n == 1 ? pt(0.4, 0.7) : pt(0.3, -0.2, 0.7);
    CHECK(rel(spectral_kernel(p, g, x, y).value, heat_kernel(p, s, x, y)) <= 1e-6);
    CHECK(rel(spectral_diagonal(p, g, x), heat_kernel(p, s, x, x)) <= 1e-6);
  }
}

TEST_CASE("spectral kernel with g = 1/r is the Delta^{-1/2} kernel") {
  const ModelParams p{1, 1.5, 1};
  const Point x = pt(0.0, 1.0), y = pt(0.5, 1.4);
  CHECK(rel(spectral_kernel(p, [](double r) { return 1.0 / r; }, x, y).value, invsqrt_kernel_closed(p, x, y)) <= 1e-5);
}
